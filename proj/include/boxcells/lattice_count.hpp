#pragma once

// Exact counting of grid points on lattice levels z.x = h. Cells of Q_n are
// indexed by their lower corners {0,...,n-1}^d; a hyperplane with
// positive-normalized normal v properly meets C(x) iff t - v.e < v.x < t.

#include <cstdint>
#include <vector>

#include "boxcells/numeric.hpp"

namespace boxcells {

/// A primitive integer normal with nonnegative entries. `flipped[i]` records
/// that coordinate i was negated; reflections x_i -> n-1-x_i are symmetries of
/// the corner grid, so counts do not depend on them.
struct LatticeDirection {
  VecZ z;
  std::vector<bool> flipped;

  Eigen::Index dim() const { return z.size(); }
  std::int64_t l1() const { return z.sum(); }
  /// z / |z|
  VecX unit() const;
};

LatticeDirection normalize_primitive(const VecZ& z);

/// counts[i] is the number of grid points x in {0,...,n-1}^d with z.x = hmin + i.
struct LevelCounts {
  std::int64_t hmin = 0;
  std::vector<BigInt> counts;

  std::int64_t hmax() const { return hmin + static_cast<std::int64_t>(counts.size()) - 1; }
  BigInt at(std::int64_t h) const;
  BigInt total() const;
};

/// Level counts over the grid {0,...,side-1}^d for any nonzero integer z, by
/// iterated convolution with (1 + q^{z_i} + ... + q^{(side-1) z_i}).
LevelCounts level_counts(const VecZ& z, std::int64_t side);
LevelCounts level_counts(const LatticeDirection& z, std::int64_t side);

/// Largest sum of `width` consecutive levels h = k-width, ..., k-1, with the
/// smallest such k.
struct WindowMax {
  BigInt count;
  std::int64_t k = 0;
  std::int64_t width = 0;
};

WindowMax window_max(const LevelCounts& levels, std::int64_t width);

/// M_d(z, n): the most corners an open slab with normal z and width |z|_1 can hold.
WindowMax strip_count_max(const LatticeDirection& z, std::int64_t n);

/// v = scale * normal with `normal` a primitive integer vector and scale > 0.
struct PrimitiveScaling {
  VecZ normal;
  Rational scale;
};

PrimitiveScaling primitive_scaling(const VecQ& v);

/// Sum of level counts over integer h with lo < h < hi (or lo <= h <= hi when `closed`).
BigInt sum_levels(const LevelCounts& levels, const Rational& lo, const Rational& hi, bool closed);

/// Number of cells of Q_n whose interior meets the hyperplane v.x = t.
BigInt cells_intersected(const VecQ& v, const Rational& t, std::int64_t n);

struct SearchResult {
  LatticeDirection best;
  BigInt count;
  WindowMax window;
  std::size_t candidates = 0;
};

/// Best strip_count_max over positive-normalized primitive z with entries
/// <= zmax; ties go to the lexicographically smallest z. The count is
/// invariant under coordinate permutations, so only nondecreasing z are
/// evaluated; the lexicographically smallest maximizer is always among them.
SearchResult best_direction_search(int dim, std::int64_t n, std::int64_t zmax);

/// N^2(n) exactly; requires d = 2 and zmax >= n.
BigInt exact_nd_small(int dim, std::int64_t n, std::int64_t zmax);

struct ConvergenceRow {
  std::int64_t n = 0;
  BigInt count;     ///< M_d(z, n)
  double ratio = 0; ///< M / n^{d-1}
  Rational vd_exact;
  double vd = 0;
  double gap = 0;   ///< |ratio - V_d(z0)|
};

std::vector<ConvergenceRow> convergence_table(const LatticeDirection& z, const std::vector<std::int64_t>& ns);

}  // namespace boxcells
