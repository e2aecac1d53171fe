#pragma once

// Inside / boundary / outside classification of unit cells C(z) = z + [0,1]^d
// against a closed convex body. A cell touching the body in a single point is
// a boundary cell.

#include <cstdint>
#include <optional>

#include "boxcells/convex_body.hpp"

namespace boxcells {

enum class CellClass { inside, boundary, outside };

const char* to_string(CellClass c);

CellClass classify_cell(const ConvexBody& body, const VecZ& corner);

struct ClassCounts {
  BigInt inside;
  BigInt boundary;
  BigInt lattice;                      ///< |K cap Z^d|
  std::optional<double> volume;        ///< closed form where available
  std::optional<Rational> exact_volume;
};

/// Scans every cell whose corner lies in the integer bounding box inflated by
/// one, and every lattice point of that box.
ClassCounts count_cells(const ConvexBody& body);

/// Boundary and inside F-cells: unit cells of the body in F-coordinates.
ClassCounts count_fcells(const ConvexBody& body, const MatZ& basis);

struct VolumeGap {
  double gap = 0.0;  ///< |vol K - |K cap Z^d||
  BigInt boundary;
  bool ok = false;   ///< gap <= boundary
  ClassCounts counts;
};

/// Needs a closed-form volume; the comparison is exact when the volume is rational.
VolumeGap check_volume_gap(const ConvexBody& body);

struct BoundaryMonotonicity {
  BigInt inner_boundary;
  BigInt outer_boundary;
  bool ok = false;
};

/// Thrown when a fixture claimed K subset L but a sampled point of K lies outside L.
class FixtureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Compares boundary-cell counts for inner ⊆ outer. Inclusion is spot-checked
/// with `samples` random points of the inner body.
BoundaryMonotonicity check_boundary_monotonicity(const ConvexBody& inner, const ConvexBody& outer,
                                                 int samples = 2000, std::uint64_t seed = 0);

/// Inside cells of the body whose interior meets v.x = t.
BigInt hyperplane_cells_in_body(const ConvexBody& body, const VecQ& normal, const Rational& t);

struct BodyHyperplaneMax {
  BigInt count;
  Rational t;  ///< a level attaining the count
};

/// Best level t for a fixed integer normal: the inside cells are histogrammed
/// by z.corner and the best |z|_1-window is taken.
BodyHyperplaneMax best_hyperplane_cells_in_body(const ConvexBody& body, const VecZ& normal);

struct BodyVEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  VecX direction;
  bool closed_form = false;
};

/// V(K) = max over unit v and t of |v|_1 vol_{d-1}(K cap A(v,t)). Balls use the
/// closed form; other bodies are estimated from `samples` uniform points of the
/// bounding box, binned into thin slabs along random directions refined by
/// local search. Half the points choose the slab, the other half measure it.
BodyVEstimate v_of_body(const ConvexBody& body, int samples, std::uint64_t seed);

}  // namespace boxcells
