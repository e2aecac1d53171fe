#pragma once

// Volumes of halfspace, hyperplane-section and strip intersections with the
// box Q_n = [0,n]^d, and the normalized maximal section V_d(v).
//
// Every function is templated on the scalar type. With `Rational` the result
// is exact; with `double` the alternating corner sum is accumulated with
// Neumaier compensation. Directions may carry zero or negative coordinates
// except where noted: negative coordinates are reflected (x_i -> n - x_i) and
// zero coordinates are factored out as prism directions.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "boxcells/numeric.hpp"

namespace boxcells {

/// Largest dimension accepted by the floating-point path.
inline constexpr Eigen::Index kMaxFloatDimension = 64;

template <typename Scalar>
struct Slab {
  Vec<Scalar> normal;
  Scalar upper;  ///< the slab is {x : upper - width < normal.x < upper}
  Scalar width;  ///< measured in normal.x units
};

template <typename Scalar>
struct CentralParams {
  Scalar t0;  ///< level of the central section
  Scalar t1;
  Scalar t2;  ///< upper level of the central strip
};

namespace detail {

inline constexpr std::uint64_t kMaxCornerTerms = std::uint64_t{1} << 26;

template <typename Scalar>
void check_box(Eigen::Index dim, const Scalar& side) {
  if (dim < 1) throw PreconditionError("dimension must be at least 1");
  if (!(side > Scalar(0))) throw PreconditionError("box side must be positive");
  if constexpr (!is_exact_v<Scalar>) {
    if (dim > kMaxFloatDimension) throw PreconditionError("floating path is limited to d <= 64");
  }
}

/// A direction with negative coordinates reflected and zero coordinates
/// removed. `shift` is added to thresholds; `dropped` counts prism factors.
template <typename Scalar>
struct ReducedDirection {
  Vec<Scalar> positive;
  Scalar shift{0};
  unsigned dropped = 0;
};

template <typename Scalar>
ReducedDirection<Scalar> reduce_direction(const Vec<Scalar>& v, const Scalar& side) {
  ReducedDirection<Scalar> out;
  std::vector<Scalar> kept;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] == Scalar(0)) {
      ++out.dropped;
    } else if (v[i] < Scalar(0)) {
      kept.push_back(-v[i]);
      out.shift += side * (-v[i]);
    } else {
      kept.push_back(v[i]);
    }
  }
  if (kept.empty()) throw PreconditionError("direction must be nonzero");
  out.positive.resize(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) out.positive[static_cast<Eigen::Index>(i)] = kept[i];
  return out;
}

/// Sum over subsets S of [d] of (-1)^|S| max(0, t - n sum_{i in S} v_i)^power,
/// for v > 0. Equal coordinates are grouped so v = c*e costs d+1 terms, and
/// subsets whose shift already exceeds t are pruned. power == 0 reads
/// max(0,x)^0 as the indicator [x > 0].
template <typename Scalar>
Scalar alternating_corner_sum(const Vec<Scalar>& v, const Scalar& t, const Scalar& side, unsigned power) {
  std::vector<Scalar> values(v.data(), v.data() + v.size());
  std::sort(values.begin(), values.end());
  std::vector<std::pair<Scalar, unsigned>> groups;
  for (const Scalar& x : values) {
    if (!groups.empty() && groups.back().first == x) {
      ++groups.back().second;
    } else {
      groups.emplace_back(x, 1U);
    }
  }

  CompensatedSum<Scalar> sum;
  std::uint64_t visited = 0;
  auto recurse = [&](auto&& self, std::size_t group, const Scalar& shift, int parity, const Scalar& weight) -> void {
    const Scalar remaining = t - shift;
    if (!(remaining > Scalar(0))) return;  // every extension only grows the shift
    if (group == groups.size()) {
      if (++visited > kMaxCornerTerms) throw PreconditionError("too many distinct coordinates for corner enumeration");
      const Scalar term = power == 0 ? weight : weight * ipow(remaining, power);
      sum.add(parity % 2 == 0 ? term : Scalar(-term));
      return;
    }
    const auto& [value, count] = groups[group];
    const Scalar step = side * value;
    for (unsigned k = 0; k <= count; ++k) {
      const Scalar next_shift = shift + Scalar(k) * step;
      if (!(t - next_shift > Scalar(0))) break;
      self(self, group + 1, next_shift, parity + static_cast<int>(k), Scalar(weight * binomial<Scalar>(count, k)));
    }
  };
  recurse(recurse, 0, Scalar(0), 0, Scalar(1));
  return sum.value();
}

template <typename Scalar>
Scalar product(const Vec<Scalar>& v) {
  Scalar p(1);
  for (Eigen::Index i = 0; i < v.size(); ++i) p *= v[i];
  return p;
}

template <typename Scalar>
Scalar l1_norm(const Vec<Scalar>& v) {
  Scalar s(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) s += v[i] < Scalar(0) ? Scalar(-v[i]) : v[i];
  return s;
}

template <typename Scalar>
double l2_norm(const Vec<Scalar>& v) {
  if constexpr (is_exact_v<Scalar>) {
    return std::sqrt(to_double(Scalar(v.dot(v))));
  } else {
    return v.norm();
  }
}

template <typename Scalar>
Scalar clamp(const Scalar& x, const Scalar& lo, const Scalar& hi) {
  if (x < lo) return lo;
  if (x > hi) return hi;
  return x;
}

}  // namespace detail

/// vol{x in Q_n : v.x <= t} for v with all coordinates strictly positive.
template <typename Scalar>
Scalar halfspace_box_volume(const Vec<Scalar>& v, const Scalar& t, const Scalar& side) {
  detail::check_box(v.size(), side);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] > Scalar(0))) throw PreconditionError("halfspace_box_volume needs all coordinates > 0");
  }
  const auto d = static_cast<unsigned>(v.size());
  const Scalar total = ipow(side, d);
  if (t >= side * v.sum()) return total;
  const Scalar sum = detail::alternating_corner_sum(v, t, side, d);
  return detail::clamp(Scalar(sum / (factorial<Scalar>(d) * detail::product(v))), Scalar(0), total);
}

/// Same as halfspace_box_volume for any nonzero v; zero coordinates are prism
/// directions and negative ones are reflected.
template <typename Scalar>
Scalar prism_halfspace_volume(const Vec<Scalar>& v, const Scalar& t, const Scalar& side) {
  detail::check_box(v.size(), side);
  const auto reduced = detail::reduce_direction(v, side);
  return halfspace_box_volume(reduced.positive, Scalar(t + reduced.shift), side) * ipow(side, reduced.dropped);
}

/// vol_{d-1}(A(v,t) cap Q_n) / |v|; rational whenever the inputs are.
template <typename Scalar>
Scalar slice_density(const Vec<Scalar>& v, const Scalar& t, const Scalar& side) {
  detail::check_box(v.size(), side);
  const auto reduced = detail::reduce_direction(v, side);
  const Vec<Scalar>& w = reduced.positive;
  const Scalar level = t + reduced.shift;
  if (level < Scalar(0) || level > side * w.sum()) return Scalar(0);
  const auto power = static_cast<unsigned>(w.size() - 1);
  const Scalar sum = detail::alternating_corner_sum(w, level, side, power);
  Scalar density = sum / (factorial<Scalar>(power) * detail::product(w));
  if (density < Scalar(0)) density = Scalar(0);
  return density * ipow(side, reduced.dropped);
}

/// True (d-1)-volume of the section A(v,t) cap Q_n.
template <typename Scalar>
double slice_volume(const Vec<Scalar>& v, const Scalar& t, const Scalar& side) {
  return detail::l2_norm(v) * to_double(slice_density(v, t, side));
}

/// vol(S cap Q_n) for the slab S = {upper - width < v.x < upper}, clamped to [0, n^d].
template <typename Scalar>
Scalar strip_volume(const Slab<Scalar>& slab, const Scalar& side) {
  if (!(slab.width > Scalar(0))) throw PreconditionError("slab width must be positive");
  const Scalar hi = prism_halfspace_volume(slab.normal, slab.upper, side);
  const Scalar lo = prism_halfspace_volume(slab.normal, Scalar(slab.upper - slab.width), side);
  return detail::clamp(Scalar(hi - lo), Scalar(0), ipow(side, static_cast<unsigned>(slab.normal.size())));
}

/// Levels of the central section (t0) and of the central strip's bounding
/// hyperplanes (t1, t2); v must have nonnegative coordinates.
template <typename Scalar>
CentralParams<Scalar> central_params(const Vec<Scalar>& v, const Scalar& side) {
  detail::check_box(v.size(), side);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] < Scalar(0)) throw PreconditionError("central_params needs a positive-normalized direction");
  }
  const Scalar width = v.sum();
  if (width == Scalar(0)) throw PreconditionError("direction must be nonzero");
  const Scalar t0 = side * width / Scalar(2);
  return {t0, Scalar(t0 - width / Scalar(2)), Scalar(t0 + width / Scalar(2))};
}

/// V_d(v) = (|v|_1/|v|) max_t vol_{d-1}(A(v,t) cap Q^1). The maximum is the
/// central section, and the |v| factors cancel, so the value is rational for
/// rational v.
template <typename Scalar>
Scalar vd_of_direction(const Vec<Scalar>& v) {
  const Vec<Scalar> magnitude = v.cwiseAbs();
  const Scalar width = magnitude.sum();
  if (width == Scalar(0)) throw PreconditionError("direction must be nonzero");
  return width * slice_density(magnitude, Scalar(width / Scalar(2)), Scalar(1));
}

/// V_d(e), exact.
Rational vd_of_ones(int dim);

struct VdMaxOptions {
  int starts = 32;
  double tolerance = 1e-10;
  int max_evaluations = 200000;
  std::uint64_t seed = 0;
};

struct VdMaxResult {
  VecX direction;  ///< unit, positive-normalized
  double value = 0.0;
  bool converged = false;
  int evaluations = 0;
  int converged_starts = 0;
};

/// Multi-start Nelder-Mead maximization of V_d over the positive unit sphere.
/// Starts run independently and are reduced in start order; values within
/// 1e-9 of the best resolve to the lexicographically smallest direction.
VdMaxResult vd_max(int dim, const VdMaxOptions& options = {});

}  // namespace boxcells
