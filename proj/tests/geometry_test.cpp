#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "boxcells/geometry.hpp"

using namespace boxcells;

namespace {

VecQ q(std::initializer_list<Rational> xs) {
  VecQ v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v[i++] = x;
  return v;
}

// Area of {x in [0,n]^2 : v.x <= t} by clipping the square polygon.
Rational clipped_square_area(const VecQ& v, const Rational& t, const Rational& n) {
  std::vector<std::pair<Rational, Rational>> poly = {{0, 0}, {n, 0}, {n, n}, {0, n}};
  std::vector<std::pair<Rational, Rational>> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    const Rational fa = v[0] * a.first + v[1] * a.second - t;
    const Rational fb = v[0] * b.first + v[1] * b.second - t;
    if (fa <= 0) out.push_back(a);
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
      const Rational s = fa / (fa - fb);
      out.emplace_back(a.first + s * (b.first - a.first), a.second + s * (b.second - a.second));
    }
  }
  Rational area(0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& a = out[i];
    const auto& b = out[(i + 1) % out.size()];
    area += a.first * b.second - b.first * a.second;
  }
  return abs(area) / 2;
}

// Length of the chord {v.x = t} cap [0,n]^2 from its endpoints on the square's edges.
double chord_length(const VecX& v, double t, double n) {
  std::vector<VecX> pts;
  for (int axis = 0; axis < 2; ++axis) {
    for (double fixed : {0.0, n}) {
      const int other = 1 - axis;
      if (v[other] == 0.0) continue;
      const double y = (t - v[axis] * fixed) / v[other];
      if (y < -1e-12 || y > n + 1e-12) continue;
      VecX p(2);
      p[axis] = fixed;
      p[other] = y;
      pts.push_back(p);
    }
  }
  double best = 0.0;
  for (const auto& a : pts)
    for (const auto& b : pts) best = std::max(best, (a - b).norm());
  return best;
}

}  // namespace

TEST(HalfspaceBoxVolume, Examples) {
  EXPECT_EQ(halfspace_box_volume<Rational>(q({1, 1}), Rational(1), Rational(1)), Rational(1, 2));
  EXPECT_EQ(halfspace_box_volume<Rational>(q({1, 1, 1}), Rational(3, 2), Rational(1)), Rational(1, 2));
  EXPECT_EQ(halfspace_box_volume<Rational>(q({1, 2}), Rational(2), Rational(1)), Rational(3, 4));
}

TEST(HalfspaceBoxVolume, RejectsNonPositiveCoordinates) {
  EXPECT_THROW(halfspace_box_volume<Rational>(q({1, 0}), Rational(1), Rational(1)), PreconditionError);
  EXPECT_THROW(halfspace_box_volume<Rational>(q({1, 1}), Rational(1), Rational(0)), PreconditionError);
}

TEST(HalfspaceBoxVolume, MatchesPolygonClippingIn2D) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> coef(-6, 6);
  std::uniform_int_distribution<int> level(-80, 80);
  for (int k = 0; k < 300; ++k) {
    const VecQ v = q({Rational(coef(rng), 1 + k % 3), Rational(coef(rng), 1 + k % 2)});
    if (v[0] == 0 && v[1] == 0) continue;
    const Rational t(level(rng), 7);
    const Rational n(1 + k % 4);
    EXPECT_EQ(prism_halfspace_volume<Rational>(v, t, n), clipped_square_area(v, t, n));
  }
}

TEST(HalfspaceBoxVolume, MatchesMonteCarloIn4D) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const VecX v = (VecX(4) << 0.3, 1.1, 0.7, 2.0).finished();
  const double t = 2.2;
  const int samples = 400000;
  int hits = 0;
  for (int s = 0; s < samples; ++s) {
    VecX x(4);
    for (int i = 0; i < 4; ++i) x[i] = 2.0 * u(rng);
    if (v.dot(x) <= t) ++hits;
  }
  const double estimate = 16.0 * hits / samples;
  const double p = static_cast<double>(hits) / samples;
  const double sigma = 16.0 * std::sqrt(p * (1 - p) / samples);
  EXPECT_NEAR(halfspace_box_volume<double>(v, t, 2.0), estimate, 5 * sigma);
}

TEST(HalfspaceBoxVolume, CentralSymmetry) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coef(1, 9);
  for (int k = 0; k < 50; ++k) {
    const int d = 2 + k % 5;
    VecQ v(d);
    for (int i = 0; i < d; ++i) v[i] = Rational(coef(rng), coef(rng));
    const Rational n(1 + k % 3);
    const Rational t = n * v.sum() * Rational(coef(rng), 10);
    const Rational total = ipow(n, static_cast<unsigned>(d));
    EXPECT_EQ(halfspace_box_volume<Rational>(v, t, n) + halfspace_box_volume<Rational>(v, Rational(n * v.sum() - t), n),
              total);
  }
}

TEST(HalfspaceBoxVolume, DoubleAgreesWithRational) {
  const VecQ v = q({1, 2, 3, 5, 7});
  for (int k = 1; k < 36; ++k) {
    const Rational t(k, 2);
    EXPECT_NEAR(halfspace_box_volume<double>(to_double(v), to_double(t), 1.0),
                to_double(halfspace_box_volume<Rational>(v, t, Rational(1))), 1e-12);
  }
}

TEST(SliceVolume, Examples) {
  EXPECT_NEAR(slice_volume<Rational>(q({1, 0}), Rational(1, 2), Rational(1)), 1.0, 1e-15);
  EXPECT_NEAR(slice_volume<Rational>(q({1, 1}), Rational(1), Rational(1)), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(slice_volume<Rational>(q({1, 1, 1}), Rational(3, 2), Rational(1)), 3.0 * std::sqrt(3.0) / 4.0, 1e-15);
}

TEST(SliceVolume, ChordOracle) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const VecX v = (VecX(2) << u(rng), u(rng)).finished();
    const double n = 3.0;
    const VecX reflected = v.cwiseAbs();
    const double t = (u(rng) + 1.0) / 2.0 * n * reflected.sum() - n * (reflected.sum() - v.sum()) / 2.0;
    EXPECT_NEAR(slice_volume<double>(v, t, n), chord_length(v, t, n), 1e-9);
  }
}

TEST(SliceVolume, DensityIsDerivativeOfHalfspaceVolume) {
  const VecQ v = q({1, 3, 4});
  const Rational n(2);
  const Rational h(1, 1000000);
  for (int k = 1; k < 16; ++k) {
    const Rational t(k, 1);
    const Rational diff = (prism_halfspace_volume<Rational>(v, Rational(t + h), n) -
                           prism_halfspace_volume<Rational>(v, Rational(t - h), n)) / (2 * h);
    EXPECT_NEAR(to_double(slice_density<Rational>(v, t, n)), to_double(diff), 1e-9);
  }
}

TEST(StripVolume, Examples) {
  EXPECT_EQ(strip_volume<Rational>({q({1, 1}), Rational(3), Rational(2)}, Rational(2)), Rational(3));
  EXPECT_EQ(strip_volume<Rational>({q({1, 0}), Rational(2), Rational(1)}, Rational(2)), Rational(2));
  EXPECT_EQ(strip_volume<Rational>({q({1, 1, 1}), Rational(3), Rational(3)}, Rational(1)), Rational(1));
  EXPECT_THROW(strip_volume<Rational>({q({1, 1}), Rational(3), Rational(0)}, Rational(2)), PreconditionError);
}

TEST(StripVolume, CentralStripIsLargest) {
  const VecQ v = q({1, 2, 2});
  const Rational n(3);
  const CentralParams<Rational> c = central_params<Rational>(v, n);
  const Rational best = strip_volume<Rational>({v, c.t2, v.sum()}, n);
  for (int k = -20; k <= 20; ++k) {
    const Rational upper = c.t2 + Rational(k, 7);
    EXPECT_LE(strip_volume<Rational>({v, upper, v.sum()}, n), best);
  }
}

TEST(CentralParams, Examples) {
  const auto a = central_params<Rational>(q({1, 1}), Rational(2));
  EXPECT_EQ(a.t0, Rational(2));
  EXPECT_EQ(a.t1, Rational(1));
  EXPECT_EQ(a.t2, Rational(3));
  const auto b = central_params<Rational>(q({1, 0}), Rational(4));
  EXPECT_EQ(b.t0, Rational(2));
  EXPECT_EQ(b.t1, Rational(3, 2));
  EXPECT_EQ(b.t2, Rational(5, 2));
  const auto c = central_params<Rational>(q({1, 1, 1}), Rational(1));
  EXPECT_EQ(c.t0, Rational(3, 2));
  EXPECT_EQ(c.t1, Rational(0));
  EXPECT_EQ(c.t2, Rational(3));
  EXPECT_THROW(central_params<Rational>(q({1, -1}), Rational(1)), PreconditionError);
}

TEST(VdOfDirection, Examples) {
  EXPECT_EQ(vd_of_direction<Rational>(q({1, 0, 0})), Rational(1));
  EXPECT_EQ(vd_of_direction<Rational>(q({1, 1})), Rational(2));
  EXPECT_EQ(vd_of_direction<Rational>(q({1, 1, 1})), Rational(9, 4));
  EXPECT_EQ(vd_of_direction<Rational>(q({1, 1, 1, 1})), Rational(8, 3));
  EXPECT_EQ(vd_of_direction<Rational>(q({3, 4})), Rational(7, 4));
  EXPECT_EQ(vd_of_ones(3), Rational(9, 4));
}

TEST(VdOfDirection, InvariantUnderSignsAndScaling) {
  EXPECT_EQ(vd_of_direction<Rational>(q({1, -2, 2})), vd_of_direction<Rational>(q({1, 2, 2})));
  EXPECT_EQ(vd_of_direction<Rational>(q({3, 6, 6})), vd_of_direction<Rational>(q({1, 2, 2})));
  EXPECT_EQ(vd_of_direction<Rational>(q({1, 2, 2})), Rational(35, 16));
}

TEST(VdOfDirection, CentralSectionBoundsOnRandomDirections) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int d = 2; d <= 8; ++d) {
    for (int k = 0; k < 200; ++k) {
      VecX v(d);
      for (int i = 0; i < d; ++i) v[i] = std::abs(g(rng));
      const double section = slice_volume<double>(v, v.sum() / 2.0, 1.0);
      EXPECT_GE(section, 1.0 - 1e-9);
      EXPECT_LE(section, std::sqrt(2.0) + 1e-9);
    }
  }
}

TEST(VdMax, FindsDiagonalInLowDimensions) {
  for (int d = 2; d <= 3; ++d) {
    const VdMaxResult r = vd_max(d);
    EXPECT_NEAR(r.value, to_double(vd_of_ones(d)), 1e-8);
    const VecX e = VecX::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    EXPECT_LT(std::acos(std::min(1.0, r.direction.dot(e))), 1e-4);
  }
  EXPECT_THROW(vd_max(1), PreconditionError);
}

TEST(VdMax, Deterministic) {
  const VdMaxResult a = vd_max(3);
  const VdMaxResult b = vd_max(3);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.direction, b.direction);
}
