#include "boxcells/basis_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "boxcells/lattice_count.hpp"

namespace boxcells {

namespace {

struct LevelRange {
  Rational lowest;
  Rational highest;
};

// Range of v.x over [0,n]^d.
LevelRange box_levels(const VecQ& v, std::int64_t side) {
  LevelRange r{Rational(0), Rational(0)};
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] < 0) r.lowest += v[i] * side;
    else r.highest += v[i] * side;
  }
  return r;
}

template <typename Scalar>
struct GramSchmidt {
  Mat<Scalar> mu;
  Vec<Scalar> norms;  // squared norms of the orthogonalized vectors
};

template <typename Scalar>
GramSchmidt<Scalar> gram_schmidt(const Mat<Scalar>& b, const Mat<Scalar>& metric) {
  const Eigen::Index d = b.rows();
  GramSchmidt<Scalar> gs{Mat<Scalar>::Zero(d, d), Vec<Scalar>::Zero(d)};
  Mat<Scalar> star = b;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const Scalar m = Scalar(b.row(i) * metric * star.row(j).transpose()) / gs.norms[j];
      gs.mu(i, j) = m;
      star.row(i) -= m * star.row(j);
    }
    gs.norms[i] = Scalar(star.row(i) * metric * star.row(i).transpose());
  }
  return gs;
}

std::int64_t nearest_integer(double x) { return static_cast<std::int64_t>(std::llround(x)); }
std::int64_t nearest_integer(const Rational& x) { return to_int64(round_rational(x)); }

bool healthy(double x) { return std::isfinite(x) && x > 0.0; }
bool healthy(const Rational& x) { return x > 0; }

template <typename Scalar>
std::optional<MatZ> lll_run(MatZ basis, const Mat<Scalar>& metric, const Scalar& delta) {
  const Eigen::Index d = basis.rows();
  constexpr long kMaxSteps = 100000;
  constexpr std::int64_t kMaxEntry = std::int64_t{1} << 40;
  Eigen::Index k = 1;
  for (long step = 0; k < d; ++step) {
    if (step > kMaxSteps) return std::nullopt;
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      const GramSchmidt<Scalar> gs = gram_schmidt<Scalar>(basis.cast<Scalar>(), metric);
      for (Eigen::Index i = 0; i < d; ++i) {
        if (!healthy(gs.norms[i])) return std::nullopt;
      }
      const std::int64_t q = nearest_integer(gs.mu(k, j));
      if (q != 0) basis.row(k) -= q * basis.row(j);
    }
    if (basis.cwiseAbs().maxCoeff() > kMaxEntry) return std::nullopt;
    const GramSchmidt<Scalar> gs = gram_schmidt<Scalar>(basis.cast<Scalar>(), metric);
    const Scalar m = gs.mu(k, k - 1);
    if (gs.norms[k] >= (delta - m * m) * gs.norms[k - 1]) {
      ++k;
    } else {
      basis.row(k).swap(basis.row(k - 1));
      k = std::max<Eigen::Index>(k - 1, 1);
    }
  }
  return basis;
}

BigInt exact_determinant(const MatZ& m) { return BigInt(numerator(Rational(to_rational(m).determinant()))); }

}  // namespace

ChebyshevSlice slice_chebyshev(const VecX& v, double t, double side) {
  const Eigen::Index d = v.size();
  if (d < 1 || !(side > 0.0)) throw PreconditionError("slice_chebyshev needs a nonempty box");
  const double norm = v.norm();
  if (!(norm > 0.0)) throw PreconditionError("direction must be nonzero");
  // Reflect negative coordinates, then work with a unit nonnegative direction.
  VecX u = v / norm;
  double level = t / norm;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (u[i] < 0.0) level -= u[i] * side;
  }
  u = u.cwiseAbs();
  ChebyshevSlice result;
  if (!(level > 0.0 && level < side * u.sum())) return result;

  VecX s(d);
  for (Eigen::Index i = 0; i < d; ++i) s[i] = std::sqrt(std::max(0.0, 1.0 - u[i] * u[i]));
  auto feasible = [&](double r) {
    const VecX lo = r * s;
    const VecX hi = VecX::Constant(d, side) - r * s;
    if ((lo.array() > hi.array()).any()) return false;
    return u.dot(lo) <= level && level <= u.dot(hi);
  };
  double lo = 0.0;
  double hi = 0.5 * side / std::max(s.maxCoeff(), 1e-300);
  while (hi - lo > 1e-12 * side) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) lo = mid;
    else hi = mid;
  }
  const VecX a = lo * s;
  const VecX b = VecX::Constant(d, side) - lo * s;
  const double span = u.dot(b - a);
  const double lambda = span > 0.0 ? std::clamp((level - u.dot(a)) / span, 0.0, 1.0) : 0.5;
  VecX center = a + lambda * (b - a);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (v[i] < 0.0) center[i] = side - center[i];
  }
  result.center = center;
  result.radius = lo;
  result.feasible = true;
  return result;
}

EllipsoidSpec strip_ellipsoid(const SlabBox& slab) {
  slab.validate();
  const Eigen::Index d = slab.normal.size();
  const LevelRange range = box_levels(slab.normal, slab.side);
  const Rational lo = std::max(slab.lower, range.lowest);
  const Rational hi = std::min(slab.upper, range.highest);
  const double side = static_cast<double>(slab.side);
  EllipsoidSpec spec;

  Eigen::Index nonzero = 0;
  Eigen::Index axis = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (slab.normal[i] != 0) ++nonzero, axis = i;
  }
  if (nonzero == 1) {
    // Inscribed ellipsoid of the box [0,n]^d cut along one axis.
    spec.axis_fallback = true;
    Rational a = lo / slab.normal[axis];
    Rational b = hi / slab.normal[axis];
    if (b < a) std::swap(a, b);
    spec.center = VecX::Constant(d, side / 2.0);
    spec.shape = MatX::Identity(d, d) * (side * side / 4.0);
    spec.center[axis] = to_double((a + b) / 2);
    const double half = to_double((b - a) / 2);
    spec.shape(axis, axis) = half * half;
    spec.degenerate = !(half > 0.0);
    return spec;
  }

  const VecX v = to_double(slab.normal);
  const double norm = v.norm();
  const VecX unit = v / norm;
  const double w = to_double(hi - lo) / (2.0 * norm);
  const ChebyshevSlice slice = slice_chebyshev(v, to_double((lo + hi) / 2), side);
  double skew = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    skew = std::max(skew, std::abs(unit[i]) / std::sqrt(std::max(0.0, 1.0 - unit[i] * unit[i])));
  }
  const double rho0 = slice.feasible ? std::max(0.0, slice.radius - w * skew) : 0.0;
  const MatX along = unit * unit.transpose();
  spec.center = slice.feasible ? slice.center : VecX::Constant(d, side / 2.0);
  spec.shape = rho0 * rho0 * (MatX::Identity(d, d) - along) + w * w * along;
  spec.degenerate = !(rho0 > 0.0 && w > 0.0);
  return spec;
}

MatZ lll_reduce(const MatZ& basis, const MatX& gram, double delta) {
  const Eigen::Index d = basis.rows();
  if (basis.cols() != d || gram.rows() != d || gram.cols() != d) throw PreconditionError("lll_reduce needs square inputs");
  if (!(delta > 0.25 && delta < 1.0)) throw PreconditionError("delta must lie in (1/4, 1)");
  if (abs(exact_determinant(basis)) != 1) throw PreconditionError("lll_reduce needs a unimodular basis");
  Eigen::LLT<MatX> llt(gram);
  if (llt.info() != Eigen::Success) throw PreconditionError("gram matrix must be positive definite");

  const MatX metric = llt.solve(MatX::Identity(d, d));
  if (auto reduced = lll_run<double>(basis, metric, delta)) {
    if (is_lll_reduced(*reduced, gram, delta)) return *reduced;
    // Rounding left the output just short of reduced; finish exactly.
    const MatQ exact_metric = to_rational(gram).inverse();
    if (auto fixed = lll_run<Rational>(*reduced, exact_metric, to_rational(delta))) return *fixed;
  }
  const MatQ exact_metric = to_rational(gram).inverse();
  if (auto reduced = lll_run<Rational>(basis, exact_metric, to_rational(delta))) return *reduced;
  throw std::runtime_error("LLL reduction failed");
}

bool is_lll_reduced(const MatZ& basis, const MatX& gram, double delta) {
  const MatQ metric = to_rational(gram).inverse();
  const GramSchmidt<Rational> gs = gram_schmidt<Rational>(to_rational(basis), metric);
  const Rational half(1, 2);
  const Rational exact_delta = to_rational(delta);
  for (Eigen::Index i = 0; i < basis.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (abs(gs.mu(i, j)) > half) return false;
    }
    if (i > 0 && gs.norms[i] < (exact_delta - gs.mu(i, i - 1) * gs.mu(i, i - 1)) * gs.norms[i - 1]) return false;
  }
  return true;
}

MatZ dual_basis(const MatZ& basis) {
  if (basis.rows() != basis.cols()) throw PreconditionError("basis must be square");
  const MatQ f = to_rational(basis);
  const Rational det = f.determinant();
  if (abs(det) != 1) throw PreconditionError("dual_basis needs a unimodular basis");
  const MatQ g = f.inverse().transpose();
  MatZ out(basis.rows(), basis.cols());
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) out(i, j) = to_int64(numerator(g(i, j)));
  }
  return out;
}

VecQ slab_box_argmax(const SlabBox& slab, const VecQ& objective) {
  const Eigen::Index d = slab.normal.size();
  if (objective.size() != d) throw PreconditionError("objective dimension mismatch");
  if (!(slab.lower <= slab.upper)) throw PreconditionError("empty slab");
  const Rational n(slab.side);
  // Reflect x_j -> n - x_j wherever v_j < 0 so that all weights are nonnegative.
  VecQ a(d);
  VecQ c(d);
  Rational lower = slab.lower;
  Rational upper = slab.upper;
  for (Eigen::Index j = 0; j < d; ++j) {
    const bool flip = slab.normal[j] < 0;
    a[j] = flip ? Rational(-slab.normal[j]) : slab.normal[j];
    c[j] = flip ? Rational(-objective[j]) : objective[j];
    if (flip) {
      lower += a[j] * n;
      upper += a[j] * n;
    }
  }
  if (upper < 0 || lower > a.sum() * n) throw PreconditionError("slab box is empty");

  VecQ x(d);
  Rational level(0);
  for (Eigen::Index j = 0; j < d; ++j) {
    x[j] = c[j] > 0 ? n : Rational(0);
    level += a[j] * x[j];
  }
  auto by_ratio = [&](bool ascending) {
    std::vector<Eigen::Index> order;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (a[j] > 0) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index p, Eigen::Index q) {
      const Rational rp = c[p] / a[p];
      const Rational rq = c[q] / a[q];
      return ascending ? rp < rq : rp > rq;
    });
    return order;
  };
  if (level > upper) {
    Rational excess = level - upper;
    for (Eigen::Index j : by_ratio(true)) {
      if (excess == 0) break;
      const Rational take = std::min(excess, Rational(a[j] * x[j]));
      x[j] -= take / a[j];
      excess -= take;
    }
  } else if (level < lower) {
    Rational deficit = lower - level;
    for (Eigen::Index j : by_ratio(false)) {
      if (deficit == 0) break;
      const Rational take = std::min(deficit, Rational(a[j] * (n - x[j])));
      x[j] += take / a[j];
      deficit -= take;
    }
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    if (slab.normal[j] < 0) x[j] = n - x[j];
  }
  return x;
}

MinimalBox minimal_box(const SlabBox& slab, const MatZ& basis) {
  const Eigen::Index d = slab.normal.size();
  if (basis.rows() != d) throw PreconditionError("basis dimension mismatch");
  const MatQ g = to_rational(dual_basis(basis));
  MinimalBox box{VecQ(d), VecQ(d), VecQ(d), {}, {}};
  for (Eigen::Index i = 0; i < d; ++i) {
    const VecQ row = g.row(i).transpose();
    VecQ high = slab_box_argmax(slab, row);
    VecQ low = slab_box_argmax(slab, VecQ(-row));
    box.beta[i] = row.dot(high);
    box.alpha[i] = row.dot(low);
    box.gamma[i] = box.beta[i] - box.alpha[i];
    box.argmax.push_back(std::move(high));
    box.argmin.push_back(std::move(low));
  }
  return box;
}

WellPosition well_position(const SlabBox& slab) {
  slab.validate();
  const Eigen::Index d = slab.normal.size();
  const auto volume = exact_rational_volume(ConvexBody(slab));
  if (!volume || *volume <= 0) throw PreconditionError("slab box has empty interior");

  WellPosition result;
  result.volume_body = *volume;
  const MatZ identity = MatZ::Identity(d, d);
  const MinimalBox standard = minimal_box(slab, identity);
  const Rational standard_volume = standard.gamma.prod();

  const EllipsoidSpec ellipsoid = strip_ellipsoid(slab);
  result.ellipsoid_degenerate = ellipsoid.degenerate;
  result.basis = identity;
  result.box = standard;
  result.volume_box = standard_volume;
  if (!ellipsoid.degenerate) {
    const MatZ reduced = lll_reduce(identity, ellipsoid.shape);
    MinimalBox box = minimal_box(slab, reduced);
    const Rational box_volume = box.gamma.prod();
    if (box_volume < standard_volume) {  // ties keep the standard basis
      result.basis = reduced;
      result.box = std::move(box);
      result.volume_box = box_volume;
    }
  }
  result.used_fallback = result.basis == identity;
  result.ratio = to_double(Rational(result.volume_box / result.volume_body));
  result.standard_ratio = to_double(Rational(standard_volume / result.volume_body));
  return result;
}

Rational boundary_fcell_estimate(const VecQ& gamma) {
  Rational total(0);
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    if (gamma[i] < 0) throw PreconditionError("box sides must be nonnegative");
    Rational term(1);
    for (Eigen::Index j = 0; j < gamma.size(); ++j) {
      if (j != i) term *= gamma[j] + 2;
    }
    total += term;
  }
  return 2 * total;
}

namespace {

// True when the lattice points of the closed slab box span an affine space of
// full dimension.
bool has_full_lattice_span(const VecZ& p, std::int64_t lo, std::int64_t hi, std::int64_t side) {
  const Eigen::Index d = p.size();
  std::vector<VecQ> pivots;  // echelon rows, pivot column = index in `columns`
  std::vector<Eigen::Index> columns;
  std::optional<VecZ> origin;
  VecZ x = VecZ::Zero(d);
  while (true) {
    const std::int64_t h = p.dot(x);
    if (lo <= h && h <= hi) {
      if (!origin) {
        origin = x;
      } else {
        VecQ r = to_rational(VecZ(x - *origin));
        for (std::size_t k = 0; k < pivots.size(); ++k) {
          if (r[columns[k]] != 0) r -= Rational(r[columns[k]] / pivots[k][columns[k]]) * pivots[k];
        }
        for (Eigen::Index c = 0; c < d; ++c) {
          if (r[c] != 0) {
            pivots.push_back(r);
            columns.push_back(c);
            break;
          }
        }
        if (static_cast<Eigen::Index>(pivots.size()) == d) return true;
      }
    }
    Eigen::Index i = 0;
    while (i < d && x[i] == side) x[i++] = 0;
    if (i == d) return d == 0;
    ++x[i];
  }
}

}  // namespace

BasicCheck check_basic_inequality(const SlabBox& slab, const MatZ& basis) {
  slab.validate();
  BasicCheck check;
  check.volume = *exact_rational_volume(ConvexBody(slab));
  check.box = minimal_box(slab, basis);

  const PrimitiveScaling scaled = primitive_scaling(slab.normal);
  const Rational lo = slab.lower / scaled.scale;
  const Rational hi = slab.upper / scaled.scale;
  const LevelCounts levels = level_counts(scaled.normal, slab.side + 1);
  check.lattice = sum_levels(levels, lo, hi, true);

  const LevelRange range = box_levels(to_rational(scaled.normal), slab.side);
  const std::int64_t first = to_int64(ceil_rational(std::max(lo, range.lowest)));
  const std::int64_t last = to_int64(floor_rational(std::min(hi, range.highest)));
  check.nondegenerate = first <= last && has_full_lattice_span(scaled.normal, first, last, slab.side);
  for (Eigen::Index i = 0; i < check.box.gamma.size(); ++i) {
    if (check.box.gamma[i] == 0) check.nondegenerate = false;
  }

  check.gap = abs(check.volume - Rational(check.lattice));
  if (check.nondegenerate) {
    Rational inverse_sum(0);
    for (Eigen::Index i = 0; i < check.box.gamma.size(); ++i) inverse_sum += 1 / check.box.gamma[i];
    check.bound = check.volume * inverse_sum;
    check.ratio = to_double(Rational(check.gap / check.bound));
  }
  return check;
}

}  // namespace boxcells
