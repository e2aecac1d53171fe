#include "boxcells/lattice_count.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "boxcells/geometry.hpp"
#include "boxcells/parallel.hpp"

namespace boxcells {

VecX LatticeDirection::unit() const {
  const VecX x = z.cast<double>();
  return x / x.norm();
}

LatticeDirection normalize_primitive(const VecZ& z) {
  if (z.size() == 0) throw PreconditionError("lattice direction must have at least one coordinate");
  std::int64_t g = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) g = std::gcd(g, z[i]);
  if (g == 0) throw PreconditionError("lattice direction must be nonzero");
  LatticeDirection out;
  out.z.resize(z.size());
  out.flipped.assign(static_cast<std::size_t>(z.size()), false);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    out.z[i] = std::abs(z[i]) / g;
    out.flipped[static_cast<std::size_t>(i)] = z[i] < 0;
  }
  return out;
}

BigInt LevelCounts::at(std::int64_t h) const {
  if (h < hmin || h > hmax()) return BigInt(0);
  return counts[static_cast<std::size_t>(h - hmin)];
}

BigInt LevelCounts::total() const {
  BigInt sum = 0;
  for (const auto& c : counts) sum += c;
  return sum;
}

namespace {

template <typename Count>
std::vector<Count> convolve_levels(const VecZ& magnitudes, std::int64_t side) {
  std::vector<Count> levels{Count(1)};
  Count prism(1);
  for (Eigen::Index i = 0; i < magnitudes.size(); ++i) {
    const std::int64_t step = magnitudes[i];
    if (step == 0) {
      prism *= Count(side);
      continue;
    }
    const auto old_size = static_cast<std::int64_t>(levels.size());
    const std::int64_t span = side * step;
    std::vector<Count> next(static_cast<std::size_t>(old_size + (side - 1) * step), Count(0));
    for (std::int64_t h = 0; h < static_cast<std::int64_t>(next.size()); ++h) {
      Count value = h < old_size ? levels[static_cast<std::size_t>(h)] : Count(0);
      if (h >= step) value += next[static_cast<std::size_t>(h - step)];
      if (h >= span && h - span < old_size) value -= levels[static_cast<std::size_t>(h - span)];
      next[static_cast<std::size_t>(h)] = value;
    }
    levels = std::move(next);
  }
  if (prism != Count(1)) {
    for (auto& c : levels) c *= prism;
  }
  return levels;
}

bool fits_in_int64(std::int64_t side, Eigen::Index dim) {
  const BigInt total = ipow(BigInt(side), static_cast<unsigned>(dim));
  return total < BigInt(std::numeric_limits<std::int64_t>::max() / 4);
}

}  // namespace

LevelCounts level_counts(const VecZ& z, std::int64_t side) {
  if (side < 1) throw PreconditionError("grid side must be at least 1");
  if (z.size() == 0 || (z.array() == 0).all()) throw PreconditionError("lattice direction must be nonzero");
  LevelCounts out;
  VecZ magnitudes = z.cwiseAbs();
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z[i] < 0) out.hmin += z[i] * (side - 1);
  }
  if (fits_in_int64(side, z.size())) {
    const auto small = convolve_levels<std::int64_t>(magnitudes, side);
    out.counts.reserve(small.size());
    for (auto c : small) out.counts.emplace_back(c);
  } else {
    out.counts = convolve_levels<BigInt>(magnitudes, side);
  }
  return out;
}

LevelCounts level_counts(const LatticeDirection& z, std::int64_t side) { return level_counts(z.z, side); }

WindowMax window_max(const LevelCounts& levels, std::int64_t width) {
  if (width < 1) throw PreconditionError("window width must be at least 1");
  // Windows ending at k-1 for k in [hmin+1, hmax+width] meet the occupied range.
  WindowMax best;
  best.width = width;
  best.count = -1;
  BigInt running = 0;
  for (std::int64_t k = levels.hmin + 1; k <= levels.hmax() + width; ++k) {
    running += levels.at(k - 1);
    running -= levels.at(k - 1 - width);
    if (running > best.count) {
      best.count = running;
      best.k = k;
    }
  }
  return best;
}

WindowMax strip_count_max(const LatticeDirection& z, std::int64_t n) {
  return window_max(level_counts(z, n), z.l1());
}

PrimitiveScaling primitive_scaling(const VecQ& v) {
  if (v.size() == 0) throw PreconditionError("direction must be nonempty");
  BigInt den_lcm = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i) den_lcm = mp::lcm(den_lcm, BigInt(denominator(v[i])));
  std::vector<BigInt> ints(static_cast<std::size_t>(v.size()));
  BigInt g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    ints[static_cast<std::size_t>(i)] = numerator(Rational(v[i] * den_lcm));
    g = mp::gcd(g, ints[static_cast<std::size_t>(i)]);
  }
  if (g == 0) throw PreconditionError("direction must be nonzero");
  if (g < 0) g = -g;
  PrimitiveScaling out;
  out.normal.resize(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out.normal[i] = to_int64(ints[static_cast<std::size_t>(i)] / g);
  out.scale = Rational(g, den_lcm);
  return out;
}

BigInt sum_levels(const LevelCounts& levels, const Rational& lo, const Rational& hi, bool closed) {
  BigInt first = closed ? ceil_rational(lo) : floor_rational(lo) + 1;
  BigInt last = closed ? floor_rational(hi) : ceil_rational(hi) - 1;
  first = std::max(first, BigInt(levels.hmin));
  last = std::min(last, BigInt(levels.hmax()));
  BigInt sum = 0;
  if (first > last) return sum;
  for (std::int64_t h = to_int64(first); BigInt(h) <= last; ++h) sum += levels.at(h);
  return sum;
}

BigInt cells_intersected(const VecQ& v, const Rational& t, std::int64_t n) {
  const PrimitiveScaling scaled = primitive_scaling(v);
  const Rational level = t / scaled.scale;
  std::int64_t above = 0;  // sum of positive entries
  std::int64_t below = 0;  // minus the sum of negative entries
  for (Eigen::Index i = 0; i < scaled.normal.size(); ++i) {
    if (scaled.normal[i] > 0) above += scaled.normal[i];
    else below -= scaled.normal[i];
  }
  // p.x + min-corner < level < p.x + max-corner, i.e. level - above < p.x < level + below.
  return sum_levels(level_counts(scaled.normal, n), level - above, level + below, false);
}

namespace {

// Nondecreasing tuples in [0, zmax]^dim with gcd 1, in lexicographic order.
std::vector<VecZ> sorted_primitive_candidates(int dim, std::int64_t zmax) {
  std::vector<VecZ> out;
  VecZ z = VecZ::Zero(dim);
  auto recurse = [&](auto&& self, int pos, std::int64_t from, std::int64_t g) -> void {
    if (pos == dim) {
      if (g == 1) out.push_back(z);
      return;
    }
    for (std::int64_t value = from; value <= zmax; ++value) {
      z[pos] = value;
      self(self, pos + 1, value, std::gcd(g, value));
    }
  };
  recurse(recurse, 0, 0, 0);
  return out;
}

}  // namespace

SearchResult best_direction_search(int dim, std::int64_t n, std::int64_t zmax) {
  if (dim < 1) throw PreconditionError("dimension must be at least 1");
  if (n < 1) throw PreconditionError("n must be at least 1");
  if (zmax < 1) throw PreconditionError("zmax must be at least 1");
  const std::vector<VecZ> candidates = sorted_primitive_candidates(dim, zmax);
  std::vector<WindowMax> values(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t i) {
    values[i] = strip_count_max(normalize_primitive(candidates[i]), n);
  });
  SearchResult result;
  result.candidates = candidates.size();
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (values[i].count > values[best].count) best = i;
  }
  result.best = normalize_primitive(candidates[best]);
  result.window = values[best];
  result.count = values[best].count;
  return result;
}

BigInt exact_nd_small(int dim, std::int64_t n, std::int64_t zmax) {
  if (dim != 2) throw PreconditionError("exact N^d(n) is only certified for d = 2");
  if (zmax < n) throw PreconditionError("exact N^2(n) needs zmax >= n");
  return best_direction_search(dim, n, zmax).count;
}

std::vector<ConvergenceRow> convergence_table(const LatticeDirection& z, const std::vector<std::int64_t>& ns) {
  if (ns.empty()) throw PreconditionError("convergence table needs at least one n");
  const Rational vd = vd_of_direction<Rational>(to_rational(z.z));
  std::vector<ConvergenceRow> rows;
  for (std::int64_t n : ns) {
    if (n < 1) throw PreconditionError("n must be at least 1");
    ConvergenceRow row;
    row.n = n;
    row.count = strip_count_max(z, n).count;
    const Rational ratio(row.count, ipow(BigInt(n), static_cast<unsigned>(z.dim() - 1)));
    row.ratio = to_double(ratio);
    row.vd_exact = vd;
    row.vd = to_double(vd);
    row.gap = to_double(Rational(abs(ratio - vd)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace boxcells
