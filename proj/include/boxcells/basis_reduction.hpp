#pragma once

// Well-positioning of strip-in-box bodies: an inscribed ellipsoid seeds an LLL
// reduction of Z^d, and the minimal box in the reduced basis is compared with
// the body's volume.

#include <cstdint>

#include "boxcells/convex_body.hpp"

namespace boxcells {

struct ChebyshevSlice {
  VecX center;
  double radius = 0.0;
  bool feasible = false;  ///< false when t is outside the open range; center is then empty
};

/// Largest (d-1)-ball inside A(v,t) cap [0,n]^d. Any nonzero v is accepted;
/// it is normalized together with t.
ChebyshevSlice slice_chebyshev(const VecX& v, double t, double side);

struct EllipsoidSpec {
  VecX center;
  MatX shape;  ///< the ellipsoid is {center + shape^{1/2} u : |u| <= 1}
  bool degenerate = false;
  bool axis_fallback = false;
};

/// Ellipsoid inside the slab {lower <= v.x <= upper} cap [0,n]^d.
EllipsoidSpec strip_ellipsoid(const SlabBox& slab);

/// Rows of `basis` are the lattice vectors; the inner product is x^T gram^{-1} y.
MatZ lll_reduce(const MatZ& basis, const MatX& gram, double delta = 0.99);
/// Exact check of size reduction (|mu| <= 1/2) and the Lovasz condition.
bool is_lll_reduced(const MatZ& basis, const MatX& gram, double delta = 0.99);

/// G = (F^{-1})^T, so that g_i . f_j = delta_ij. Rejects non-unimodular F.
MatZ dual_basis(const MatZ& basis);

struct MinimalBox {
  VecQ alpha;
  VecQ beta;
  VecQ gamma;
  std::vector<VecQ> argmin;  ///< points of K attaining alpha_i
  std::vector<VecQ> argmax;  ///< points of K attaining beta_i
};

/// max c.x over {0 <= x <= n, lower <= v.x <= upper}; returns the maximizer.
VecQ slab_box_argmax(const SlabBox& slab, const VecQ& objective);

/// alpha_i = min g_i.x, beta_i = max g_i.x over K, with g_i the dual basis of F.
MinimalBox minimal_box(const SlabBox& slab, const MatZ& basis);

struct WellPosition {
  MatZ basis;
  MinimalBox box;
  Rational volume_body;
  Rational volume_box;
  double ratio = 0.0;
  double standard_ratio = 0.0;  ///< ratio for the standard basis
  bool used_fallback = false;
  bool ellipsoid_degenerate = false;
};

WellPosition well_position(const SlabBox& slab);

/// 2 sum_i prod_{j != i} (gamma_j + 2)
Rational boundary_fcell_estimate(const VecQ& gamma);

struct BasicCheck {
  bool nondegenerate = false;  ///< K holds d+1 affinely independent lattice points
  Rational volume;
  BigInt lattice;
  Rational gap;    ///< |vol K - |K cap Z^d||
  Rational bound;  ///< vol K * sum 1/gamma_i
  double ratio = 0.0;
  MinimalBox box;
};

/// Lattice points are counted in the closed slab box. A degenerate body is
/// reported through `nondegenerate`, never thrown.
BasicCheck check_basic_inequality(const SlabBox& slab, const MatZ& basis);

}  // namespace boxcells
