#include "boxcells/generators.hpp"

namespace boxcells {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// m / den with m not a multiple of den.
Rational off_grid(Rng& rng, std::int64_t lo_num, std::int64_t hi_num, std::int64_t den) {
  std::int64_t m;
  do {
    m = uniform_int(rng, lo_num, hi_num);
  } while (m % den == 0);
  return Rational(m, den);
}

}  // namespace

Rng case_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

Ball random_ball(Rng& rng, int dim) {
  VecX center(dim);
  for (int i = 0; i < dim; ++i) center[i] = uniform(rng, 2.1, 6.9);
  return make_ball(center, uniform(rng, 0.8, 3.7));
}

HPolytope random_simplex(Rng& rng, int dim) {
  constexpr std::int64_t den = 13;
  while (true) {
    std::vector<VecQ> vertices;
    for (int k = 0; k <= dim; ++k) {
      VecQ p(dim);
      for (int i = 0; i < dim; ++i) p[i] = off_grid(rng, 0, 7 * den, den);
      vertices.push_back(p);
    }
    MatQ edges(dim, dim);
    for (int k = 0; k < dim; ++k) edges.row(k) = (vertices[k + 1] - vertices[0]).transpose();
    const Rational det = edges.determinant();
    // Skip slivers: |det| / d! below 1/2.
    if (abs(det) < Rational(factorial<std::int64_t>(static_cast<unsigned>(dim)), 2)) continue;
    return HPolytope::simplex(vertices);
  }
}

SlabBox random_slab_box(Rng& rng, int dim) {
  const std::int64_t side = dim == 2 ? uniform_int(rng, 3, 8) : uniform_int(rng, 3, 5);
  VecQ normal(dim);
  do {
    const std::int64_t den = uniform_int(rng, 1, 3);
    for (int i = 0; i < dim; ++i) normal[i] = Rational(uniform_int(rng, -4, 4), den);
  } while ((normal.array() == Rational(0)).all());
  Rational lowest(0);
  Rational highest(0);
  for (int i = 0; i < dim; ++i) {
    if (normal[i] < 0) lowest += normal[i] * side;
    else highest += normal[i] * side;
  }
  const Rational range = highest - lowest;
  // Fractions with denominator 97 keep the levels off the lattice.
  const Rational a = off_grid(rng, 1, 70, 97);
  const Rational b = off_grid(rng, 15, 90, 97);
  const Rational lower = lowest + range * a - range / 10;
  const Rational upper = lower + range * b;
  return make_slab_box(normal, lower, upper, side);
}

NamedBody random_exact_body(Rng& rng) {
  const int dim = static_cast<int>(uniform_int(rng, 2, 3));
  switch (uniform_int(rng, 0, 2)) {
    case 0:
      return {"ball", random_ball(rng, dim)};
    case 1:
      return {"simplex", random_simplex(rng, dim)};
    default:
      return {"slab", random_slab_box(rng, dim)};
  }
}

NestedPair random_nested_pair(Rng& rng) {
  NamedBody outer = random_exact_body(rng);
  const VecQ anchor = interior_point(outer.body);
  const auto [lo, hi] = real_bounds(outer.body);
  VecX x(lo.size());
  do {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = uniform(rng, lo[i], hi[i]);
  } while (!contains_point(outer.body, x));
  // Midpoint of a point of K and an interior point is interior.
  const VecQ center = (anchor + to_rational(x)) / Rational(2);
  const Rational factor(uniform_int(rng, 12, 36), 40);
  ConvexBody inner = shrink_about(outer.body, center, factor);
  return {outer.kind, std::move(inner), std::move(outer.body), factor};
}

SlabBox random_thin_strip(Rng& rng, int dim, std::int64_t side) {
  VecZ v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = uniform_int(rng, -5, 5);
  } while ((v.array() == 0).count() > dim - 2);
  const VecQ normal = to_rational(v);
  const std::int64_t width = v.cwiseAbs().sum();
  const Rational middle = normal.sum() * side / 2;
  // Offset within a quarter of the level range, off the integers.
  const std::int64_t spread = width * side / 4;
  const Rational offset = Rational(uniform_int(rng, -7 * spread, 7 * spread), 7) + Rational(1, 3);
  const Rational lower = middle + offset - Rational(width, 2);
  return make_slab_box(normal, lower, lower + width, side);
}

}  // namespace boxcells
