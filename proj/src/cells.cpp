#include "boxcells/cells.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "boxcells/lattice_count.hpp"
#include "boxcells/linear_program.hpp"

namespace boxcells {

const char* to_string(CellClass c) {
  switch (c) {
    case CellClass::inside:
      return "inside";
    case CellClass::boundary:
      return "boundary";
    case CellClass::outside:
      return "outside";
  }
  return "unknown";
}

namespace {

CellClass classify_ball(const Ball& ball, const VecZ& corner) {
  double near = 0.0;
  double far = 0.0;
  for (Eigen::Index i = 0; i < corner.size(); ++i) {
    const double lo = static_cast<double>(corner[i]) - ball.center[i];
    const double hi = lo + 1.0;
    const double clamped = lo > 0.0 ? lo : (hi < 0.0 ? hi : 0.0);
    near += clamped * clamped;
    far += std::max(lo * lo, hi * hi);
  }
  const double r2 = ball.radius * ball.radius;
  if (far <= r2) return CellClass::inside;
  if (near > r2) return CellClass::outside;
  return CellClass::boundary;
}

CellClass classify_polytope(const HPolytope& p, const VecZ& corner) {
  const VecQ z = to_rational(corner);
  bool inside = true;
  for (Eigen::Index r = 0; r < p.normals().rows(); ++r) {
    Rational lo = p.normals().row(r).dot(z);
    Rational hi = lo;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const Rational& a = p.normals()(r, i);
      if (a > 0) hi += a;
      else lo += a;
    }
    if (lo > p.offsets()[r]) return CellClass::outside;
    if (hi > p.offsets()[r]) inside = false;
  }
  if (inside) return CellClass::inside;
  const VecQ center = z + VecQ::Constant(z.size(), Rational(1, 2));
  if (p.contains(center)) return CellClass::boundary;
  const VecQ upper = z + VecQ::Ones(z.size());
  return box_meets_polyhedron(p.normals(), p.offsets(), z, upper) ? CellClass::boundary : CellClass::outside;
}

CellClass classify_slab(const SlabBox& s, const VecZ& corner) {
  const Eigen::Index d = corner.size();
  bool within_box = true;
  Rational lo(0);
  Rational hi(0);
  Rational cell_lo(0);
  Rational cell_hi(0);
  for (Eigen::Index i = 0; i < d; ++i) {
    const std::int64_t a = std::max<std::int64_t>(corner[i], 0);
    const std::int64_t b = std::min<std::int64_t>(corner[i] + 1, s.side);
    if (a > b) return CellClass::outside;
    if (corner[i] < 0 || corner[i] + 1 > s.side) within_box = false;
    const Rational& v = s.normal[i];
    // Range of v_i x_i over the clipped interval and over the whole cell.
    const Rational va = v * a;
    const Rational vb = v * b;
    lo += std::min(va, vb);
    hi += std::max(va, vb);
    const Rational ca = v * corner[i];
    const Rational cb = v * (corner[i] + 1);
    cell_lo += std::min(ca, cb);
    cell_hi += std::max(ca, cb);
  }
  if (hi < s.lower || lo > s.upper) return CellClass::outside;
  if (within_box && s.lower <= cell_lo && cell_hi <= s.upper) return CellClass::inside;
  return CellClass::boundary;
}

// Calls fn(z) for every integer z in [lo, hi].
template <typename Fn>
void for_each_point(const VecZ& lo, const VecZ& hi, Fn&& fn) {
  if ((hi.array() < lo.array()).any()) return;
  VecZ z = lo;
  const Eigen::Index d = lo.size();
  while (true) {
    fn(z);
    Eigen::Index i = 0;
    while (i < d && z[i] == hi[i]) {
      z[i] = lo[i];
      ++i;
    }
    if (i == d) return;
    ++z[i];
  }
}

std::int64_t primitive_gcd(const VecZ& v) {
  std::int64_t g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = std::gcd(g, v[i]);
  return g;
}

}  // namespace

CellClass classify_cell(const ConvexBody& body, const VecZ& corner) {
  if (corner.size() != dimension(body)) throw PreconditionError("cell dimension does not match the body");
  if (const auto* ball = std::get_if<Ball>(&body)) return classify_ball(*ball, corner);
  if (const auto* poly = std::get_if<HPolytope>(&body)) return classify_polytope(*poly, corner);
  return classify_slab(std::get<SlabBox>(body), corner);
}

ClassCounts count_cells(const ConvexBody& body) {
  const IntegerBox bounds = lattice_bounds(body);
  ClassCounts counts;
  std::int64_t inside = 0;
  std::int64_t boundary = 0;
  std::int64_t lattice = 0;
  const VecZ first_corner = bounds.lo - VecZ::Ones(bounds.lo.size());
  for_each_point(first_corner, bounds.hi, [&](const VecZ& z) {
    switch (classify_cell(body, z)) {
      case CellClass::inside:
        ++inside;
        break;
      case CellClass::boundary:
        ++boundary;
        break;
      case CellClass::outside:
        break;
    }
  });
  for_each_point(bounds.lo, bounds.hi, [&](const VecZ& z) {
    if (contains_lattice_point(body, z)) ++lattice;
  });
  counts.inside = inside;
  counts.boundary = boundary;
  counts.lattice = lattice;
  counts.exact_volume = exact_rational_volume(body);
  counts.volume = exact_volume(body);
  return counts;
}

ClassCounts count_fcells(const ConvexBody& body, const MatZ& basis) {
  ClassCounts counts = count_cells(in_basis_coordinates(body, basis));
  // Unimodular maps preserve volume; keep the original closed form.
  counts.exact_volume = exact_rational_volume(body);
  counts.volume = exact_volume(body);
  return counts;
}

VolumeGap check_volume_gap(const ConvexBody& body) {
  VolumeGap result;
  result.counts = count_cells(body);
  if (!result.counts.volume) throw PreconditionError("no closed-form volume for this body");
  result.boundary = result.counts.boundary;
  if (result.counts.exact_volume) {
    const Rational gap = abs(*result.counts.exact_volume - Rational(result.counts.lattice));
    result.gap = to_double(gap);
    result.ok = gap <= Rational(result.boundary);
  } else {
    result.gap = std::abs(*result.counts.volume - to_double(result.counts.lattice));
    result.ok = result.gap <= to_double(result.boundary);
  }
  return result;
}

BoundaryMonotonicity check_boundary_monotonicity(const ConvexBody& inner, const ConvexBody& outer, int samples,
                                                 std::uint64_t seed) {
  if (dimension(inner) != dimension(outer)) throw PreconditionError("bodies differ in dimension");
  std::mt19937_64 rng(seed);
  const auto [lo, hi] = real_bounds(inner);
  int accepted = 0;
  for (long attempt = 0; accepted < samples && attempt < 50L * samples; ++attempt) {
    VecX x(lo.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    if (!contains_point(inner, x)) continue;
    ++accepted;
    if (!contains_point(outer, x)) throw FixtureError("inner body is not contained in the outer body");
  }
  BoundaryMonotonicity result;
  result.inner_boundary = count_cells(inner).boundary;
  result.outer_boundary = count_cells(outer).boundary;
  result.ok = result.inner_boundary <= result.outer_boundary;
  return result;
}

BigInt hyperplane_cells_in_body(const ConvexBody& body, const VecQ& normal, const Rational& t) {
  if (normal.size() != dimension(body)) throw PreconditionError("normal dimension does not match the body");
  const PrimitiveScaling scaled = primitive_scaling(normal);
  const Rational level = t / scaled.scale;
  std::int64_t above = 0;
  std::int64_t below = 0;
  for (Eigen::Index i = 0; i < scaled.normal.size(); ++i) {
    if (scaled.normal[i] > 0) above += scaled.normal[i];
    else below -= scaled.normal[i];
  }
  const IntegerBox bounds = lattice_bounds(body);
  std::int64_t count = 0;
  for_each_point(bounds.lo - VecZ::Ones(bounds.lo.size()), bounds.hi, [&](const VecZ& z) {
    const Rational h(scaled.normal.dot(z));
    if (level - above < h && h < level + below && classify_cell(body, z) == CellClass::inside) ++count;
  });
  return BigInt(count);
}

BodyHyperplaneMax best_hyperplane_cells_in_body(const ConvexBody& body, const VecZ& normal) {
  if (normal.size() != dimension(body)) throw PreconditionError("normal dimension does not match the body");
  const std::int64_t g = primitive_gcd(normal);
  if (g == 0) throw PreconditionError("normal must be nonzero");
  const VecZ p = normal / std::abs(g);
  std::int64_t above = 0;
  std::int64_t below = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0) above += p[i];
    else below -= p[i];
  }
  std::map<std::int64_t, std::int64_t> histogram;
  const IntegerBox bounds = lattice_bounds(body);
  for_each_point(bounds.lo - VecZ::Ones(bounds.lo.size()), bounds.hi, [&](const VecZ& z) {
    if (classify_cell(body, z) == CellClass::inside) ++histogram[p.dot(z)];
  });
  BodyHyperplaneMax best;
  if (histogram.empty()) {
    best.count = 0;
    best.t = 0;
    return best;
  }
  LevelCounts levels;
  levels.hmin = histogram.begin()->first;
  levels.counts.assign(static_cast<std::size_t>(histogram.rbegin()->first - levels.hmin + 1), BigInt(0));
  for (const auto& [h, c] : histogram) levels.counts[static_cast<std::size_t>(h - levels.hmin)] = c;
  const std::int64_t width = above + below;
  const WindowMax window = window_max(levels, width);
  best.count = window.count;
  // (t - above, t + below) must contain exactly the levels k-width .. k-1.
  best.t = Rational(window.k - width + above) - Rational(1, 2);
  return best;
}

BodyVEstimate v_of_body(const ConvexBody& body, int samples, std::uint64_t seed) {
  const Eigen::Index d = dimension(body);
  BodyVEstimate result;
  if (const auto* ball = std::get_if<Ball>(&body)) {
    result.value = std::sqrt(static_cast<double>(d)) * ball_volume(static_cast<int>(d - 1), ball->radius);
    result.direction = VecX::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    result.closed_form = true;
    return result;
  }
  if (samples < 1000) throw PreconditionError("v_of_body needs at least 1000 samples");

  std::mt19937_64 rng(seed);
  const auto [lo, hi] = real_bounds(body);
  const double box_volume = (hi - lo).prod();
  // Even draws pick the direction and level, odd draws measure them.
  std::vector<VecX> search;
  std::vector<VecX> holdout;
  for (int k = 0; k < samples; ++k) {
    VecX x(d);
    for (Eigen::Index i = 0; i < d; ++i) x[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    if (contains_point(body, x)) (k % 2 == 0 ? search : holdout).push_back(std::move(x));
  }
  const int search_draws = (samples + 1) / 2;
  const int holdout_draws = samples / 2;
  const double diameter = (hi - lo).norm();
  const double width = 0.02 * diameter;
  constexpr int kSubBins = 8;
  const double bin = width / kSubBins;
  const auto bins = static_cast<std::size_t>(std::ceil(3.0 * diameter / bin)) + 1;

  auto bin_of = [&](const VecX& v, const VecX& x) {
    const double origin = v.dot(lo) - diameter;  // shifts every projection above zero
    return std::min(static_cast<std::size_t>((v.dot(x) - origin) / bin), bins - 1);
  };
  // Largest count of points in a window of `width` along v, and the last bin of that window.
  auto section = [&](const VecX& v) {
    std::vector<int> histogram(bins, 0);
    for (const auto& x : search) ++histogram[bin_of(v, x)];
    int running = 0;
    int best = 0;
    std::size_t end = 0;
    for (std::size_t b = 0; b < bins; ++b) {
      running += histogram[b];
      if (b >= kSubBins) running -= histogram[b - kSubBins];
      if (running > best) best = running, end = b;
    }
    return std::pair{best, end};
  };
  auto score = [&](const VecX& v, int count, int draws) {
    return v.lpNorm<1>() * box_volume * count / (static_cast<double>(draws) * width);
  };

  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_unit = [&] {
    VecX v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = gauss(rng);
    return VecX(v / v.norm());
  };
  VecX best_v = random_unit();
  auto [best_count, best_end] = section(best_v);
  double best_score = score(best_v, best_count, search_draws);
  auto consider = [&](const VecX& v) {
    const auto [c, end] = section(v);
    if (score(v, c, search_draws) > best_score) best_v = v, best_count = c, best_end = end, best_score = score(v, c, search_draws);
  };
  for (int k = 1; k < 64 * static_cast<int>(d); ++k) consider(random_unit());
  double step = 0.2;
  for (int k = 0; k < 200; ++k, step *= 0.98) {
    VecX v = best_v;
    for (Eigen::Index i = 0; i < d; ++i) v[i] += step * gauss(rng);
    consider(VecX(v / v.norm()));
  }

  int measured = 0;
  for (const auto& x : holdout) {
    const std::size_t b = bin_of(best_v, x);
    if (b <= best_end && b + kSubBins > best_end) ++measured;
  }
  const double p = static_cast<double>(measured) / holdout_draws;
  result.value = score(best_v, measured, holdout_draws);
  result.standard_error = best_v.lpNorm<1>() * box_volume * std::sqrt(p * (1.0 - p) / holdout_draws) / width;
  result.direction = best_v;
  return result;
}

}  // namespace boxcells
