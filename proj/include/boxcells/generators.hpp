#pragma once

// Random fixtures for the property suites. Coordinates and radii are drawn
// off the half-integer grid so that exact tangencies with cells are unlikely.

#include <cstdint>
#include <random>
#include <string>

#include "boxcells/convex_body.hpp"

namespace boxcells {

using Rng = std::mt19937_64;

/// Deterministic per-case generator: the stream depends only on (seed, index).
Rng case_rng(std::uint64_t seed, std::uint64_t index);

struct NamedBody {
  std::string kind;  ///< "ball", "simplex" or "slab"
  ConvexBody body;
};

Ball random_ball(Rng& rng, int dim);
HPolytope random_simplex(Rng& rng, int dim);
SlabBox random_slab_box(Rng& rng, int dim);

/// One of the three exact-volume families, d in {2,3}.
NamedBody random_exact_body(Rng& rng);

struct NestedPair {
  std::string kind;
  ConvexBody inner;
  ConvexBody outer;
  Rational factor;
};

/// outer random, inner = interior point + factor * (outer - point), factor in [0.3, 0.9].
NestedPair random_nested_pair(Rng& rng);

/// Slab box [0,50]^d with a random integer normal v and width |v|_1, placed
/// at a random level of the inner half of the box.
SlabBox random_thin_strip(Rng& rng, int dim, std::int64_t side = 50);

}  // namespace boxcells
