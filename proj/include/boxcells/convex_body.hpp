#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "boxcells/numeric.hpp"

namespace boxcells {

/// Closed Euclidean ball.
struct Ball {
  VecX center;
  double radius = 0.0;
};

/// Bounded polytope {x : normals * x <= offsets} with a certified interior
/// point. The exact bounding box is computed once at construction.
class HPolytope {
 public:
  HPolytope(MatQ normals, VecQ offsets, VecQ interior);

  /// Simplex with the given d+1 affinely independent vertices.
  static HPolytope simplex(const std::vector<VecQ>& vertices);
  static HPolytope box(const VecQ& lower, const VecQ& upper);

  Eigen::Index dim() const { return normals_.cols(); }
  const MatQ& normals() const { return normals_; }
  const VecQ& offsets() const { return offsets_; }
  const VecQ& interior() const { return interior_; }
  const VecQ& lower() const { return lower_; }
  const VecQ& upper() const { return upper_; }

  bool contains(const VecQ& x) const;

 private:
  MatQ normals_;
  VecQ offsets_;
  VecQ interior_;
  VecQ lower_;
  VecQ upper_;
};

/// {x in [0,side]^d : lower <= normal.x <= upper}, closed.
struct SlabBox {
  VecQ normal;
  Rational lower;
  Rational upper;
  std::int64_t side = 1;

  void validate() const;
};

using ConvexBody = std::variant<Ball, HPolytope, SlabBox>;

Ball make_ball(VecX center, double radius);
SlabBox make_slab_box(VecQ normal, Rational lower, Rational upper, std::int64_t side);

Eigen::Index dimension(const ConvexBody& body);

bool contains_lattice_point(const ConvexBody& body, const VecZ& x);
/// Floating-point membership, used by samplers.
bool contains_point(const ConvexBody& body, const VecX& x);

/// Integer box [lo, hi] that contains the body.
struct IntegerBox {
  VecZ lo;
  VecZ hi;
};
IntegerBox lattice_bounds(const ConvexBody& body);
/// Floating bounding box, for sampling.
std::pair<VecX, VecX> real_bounds(const ConvexBody& body);

/// Exact volume for polytopes of dimension <= 3 and slab boxes.
std::optional<Rational> exact_rational_volume(const ConvexBody& body);
/// Closed-form volume: balls, polytopes of dimension <= 3, slab boxes.
std::optional<double> exact_volume(const ConvexBody& body);

/// Volume of a d-ball.
double ball_volume(int dim, double radius);

HPolytope as_hpolytope(const SlabBox& slab);

/// The body expressed in coordinates y of the basis F (rows f_i), x = F^T y.
/// Cells of the result are the F-cells of the original body.
HPolytope in_basis_coordinates(const ConvexBody& body, const MatZ& basis);

/// p + factor * (K - p); balls stay balls, everything else becomes an HPolytope.
ConvexBody shrink_about(const ConvexBody& body, const VecQ& center, const Rational& factor);

/// Some point in the interior of the body.
VecQ interior_point(const ConvexBody& body);

}  // namespace boxcells
