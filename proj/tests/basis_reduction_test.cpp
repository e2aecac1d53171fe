#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "boxcells/basis_reduction.hpp"
#include "boxcells/cells.hpp"
#include "boxcells/generators.hpp"
#include "boxcells/linear_program.hpp"

using namespace boxcells;

namespace {

VecQ q(std::initializer_list<Rational> xs) {
  VecQ v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v[i++] = x;
  return v;
}

VecX x_of(std::initializer_list<double> xs) {
  VecX v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

MatZ m_of(int rows, std::initializer_list<std::int64_t> xs) {
  const int cols = static_cast<int>(xs.size()) / rows;
  MatZ m(rows, cols);
  auto it = xs.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = *it++;
  return m;
}

bool has_row(const MatZ& m, const VecZ& row) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m.row(i).transpose() == row || m.row(i).transpose() == VecZ(-row)) return true;
  }
  return false;
}

Rational det_of(const MatZ& m) { return to_rational(m).determinant(); }

// max c.x over the slab box by the simplex method.
Rational lp_support(const SlabBox& s, const VecQ& c) {
  const Eigen::Index d = s.normal.size();
  MatQ A(d + 2, d);
  VecQ b(d + 2);
  A.topRows(d) = MatQ::Identity(d, d);
  b.head(d) = VecQ::Constant(d, Rational(s.side));
  A.row(d) = s.normal.transpose();
  b[d] = s.upper;
  A.row(d + 1) = -s.normal.transpose();
  b[d + 1] = -s.lower;
  const LpResult r = maximize(A, b, c);
  EXPECT_EQ(r.status, LpStatus::optimal);
  return r.value;
}

SlabBox diagonal_strip() { return make_slab_box(q({1, 1}), Rational(9), Rational(11), 10); }

}  // namespace

TEST(SliceChebyshev, Examples) {
  const ChebyshevSlice a = slice_chebyshev(x_of({1, 0}), 1.0, 2.0);
  ASSERT_TRUE(a.feasible);
  EXPECT_NEAR(a.radius, 1.0, 1e-10);
  EXPECT_NEAR((a.center - x_of({1, 1})).norm(), 0.0, 1e-9);

  const double r2 = std::sqrt(2.0);
  const ChebyshevSlice b = slice_chebyshev(x_of({1 / r2, 1 / r2}), r2, 2.0);
  EXPECT_NEAR(b.radius, r2, 1e-10);
  EXPECT_NEAR((b.center - x_of({1, 1})).norm(), 0.0, 1e-9);

  const double r3 = std::sqrt(3.0);
  const ChebyshevSlice c = slice_chebyshev(x_of({1 / r3, 1 / r3, 1 / r3}), r3 / 2.0, 1.0);
  EXPECT_NEAR(c.radius, 0.5 / std::sqrt(2.0 / 3.0), 1e-10);
  EXPECT_NEAR((c.center - x_of({0.5, 0.5, 0.5})).norm(), 0.0, 1e-9);
}

TEST(SliceChebyshev, InfeasibleLevels) {
  EXPECT_FALSE(slice_chebyshev(x_of({1, 1}), 0.0, 1.0).feasible);
  EXPECT_FALSE(slice_chebyshev(x_of({1, 1}), 2.5, 1.0).feasible);
  EXPECT_THROW(slice_chebyshev(x_of({0, 0}), 1.0, 1.0), PreconditionError);
}

TEST(SliceChebyshev, BallStaysInsideTheSlice) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  for (int k = 0; k < 200; ++k) {
    const int d = 2 + k % 3;
    VecX v(d);
    for (int i = 0; i < d; ++i) v[i] = g(rng);
    v.normalize();
    const double n = 5.0;
    double lo = 0.0;
    double hi = 0.0;
    for (int i = 0; i < d; ++i) (v[i] < 0 ? lo : hi) += v[i] * n;
    const double t = lo + (hi - lo) * std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    const ChebyshevSlice s = slice_chebyshev(v, t, n);
    ASSERT_TRUE(s.feasible);
    EXPECT_NEAR(v.dot(s.center), t, 1e-9);
    // Every in-plane direction u moves a coordinate by at most |u_i| <= sqrt(1 - v_i^2).
    for (int j = 0; j < 20; ++j) {
      VecX u(d);
      for (int i = 0; i < d; ++i) u[i] = g(rng);
      u -= u.dot(v) * v;
      u.normalize();
      const VecX p = s.center + s.radius * u;
      EXPECT_GE(p.minCoeff(), -1e-9);
      EXPECT_LE(p.maxCoeff(), n + 1e-9);
    }
  }
}

TEST(StripEllipsoid, AxisSlab) {
  const EllipsoidSpec e = strip_ellipsoid(make_slab_box(q({1, 0}), Rational(1), Rational(2), 2));
  EXPECT_TRUE(e.axis_fallback);
  EXPECT_FALSE(e.degenerate);
  EXPECT_NEAR((e.center - x_of({1.5, 1.0})).norm(), 0.0, 1e-12);
  EXPECT_NEAR(std::sqrt(e.shape(0, 0)), 0.5, 1e-12);
  EXPECT_NEAR(std::sqrt(e.shape(1, 1)), 1.0, 1e-12);
}

TEST(StripEllipsoid, CentralDiagonalStrip) {
  const EllipsoidSpec e = strip_ellipsoid(make_slab_box(q({1, 1}), Rational(9), Rational(11), 10));
  const double w = std::sqrt(2.0) / 2.0;
  Eigen::SelfAdjointEigenSolver<MatX> eig(e.shape);
  EXPECT_NEAR(std::sqrt(eig.eigenvalues()[0]), w, 1e-9);
  EXPECT_NEAR(std::sqrt(eig.eigenvalues()[1]), 5.0 * std::sqrt(2.0) - w, 1e-9);
}

TEST(StripEllipsoid, UnitCubeDiagonal) {
  const EllipsoidSpec e = strip_ellipsoid(make_slab_box(q({1, 1, 1}), Rational(0), Rational(3), 1));
  const VecX unit = VecX::Constant(3, 1.0 / std::sqrt(3.0));
  EXPECT_NEAR(std::sqrt(unit.dot(e.shape * unit)), std::sqrt(3.0) / 2.0, 1e-9);
}

TEST(StripEllipsoid, SampledPointsLieInTheBody) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (std::uint64_t c = 0; c < 30; ++c) {
    Rng body_rng = case_rng(43, c);
    const SlabBox slab = random_thin_strip(body_rng, 2 + static_cast<int>(c % 3));
    const EllipsoidSpec e = strip_ellipsoid(slab);
    if (e.degenerate) continue;
    const Eigen::Index d = e.center.size();
    Eigen::SelfAdjointEigenSolver<MatX> eig(e.shape);
    const MatX root = eig.operatorSqrt();
    const VecX v = to_double(slab.normal);
    for (int s = 0; s < 10000 / 30; ++s) {
      VecX dir(d);
      for (Eigen::Index i = 0; i < d; ++i) dir[i] = g(rng);
      dir *= std::pow(u(rng), 1.0 / static_cast<double>(d)) / dir.norm();
      const VecX p = e.center + root * dir;
      EXPECT_GE(p.minCoeff(), -1e-9);
      EXPECT_LE(p.maxCoeff(), static_cast<double>(slab.side) + 1e-9);
      EXPECT_GE(v.dot(p), to_double(slab.lower) - 1e-9);
      EXPECT_LE(v.dot(p), to_double(slab.upper) + 1e-9);
      ++checked;
    }
  }
  EXPECT_GT(checked, 5000);
}

TEST(LllReduce, Examples) {
  const MatZ a = lll_reduce(m_of(2, {1, 0, 100, 1}), MatX::Identity(2, 2));
  EXPECT_TRUE(has_row(a, VecZ::Unit(2, 0)));
  EXPECT_TRUE(has_row(a, VecZ::Unit(2, 1)));
  EXPECT_EQ(lll_reduce(MatZ::Identity(2, 2), MatX::Identity(2, 2)), MatZ::Identity(2, 2));
  const EllipsoidSpec e = strip_ellipsoid(diagonal_strip());
  const MatZ b = lll_reduce(MatZ::Identity(2, 2), e.shape);
  EXPECT_TRUE(has_row(b, (VecZ(2) << 1, -1).finished()));
}

TEST(LllReduce, RandomInputsStayUnimodularAndReduced) {
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<std::int64_t> entry(-9, 9);
  std::normal_distribution<double> g;
  for (int k = 0; k < 100; ++k) {
    const int d = 2 + k % 3;
    // Random unimodular start: product of elementary row operations.
    MatZ basis = MatZ::Identity(d, d);
    for (int s = 0; s < 6; ++s) {
      const int i = static_cast<int>(rng() % d);
      const int j = (i + 1 + static_cast<int>(rng() % (d - 1))) % d;
      basis.row(i) += entry(rng) * basis.row(j);
    }
    MatX a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = g(rng);
    const MatX gram = a * a.transpose() + 0.01 * MatX::Identity(d, d);
    const MatZ reduced = lll_reduce(basis, gram);
    EXPECT_EQ(abs(det_of(reduced)), Rational(1));
    EXPECT_TRUE(is_lll_reduced(reduced, gram));
  }
}

TEST(LllReduce, RejectsBadInput) {
  EXPECT_THROW(lll_reduce(m_of(2, {2, 0, 0, 1}), MatX::Identity(2, 2)), PreconditionError);
  EXPECT_THROW(lll_reduce(MatZ::Identity(2, 2), -MatX::Identity(2, 2)), PreconditionError);
}

TEST(DualBasis, Examples) {
  EXPECT_EQ(dual_basis(MatZ::Identity(3, 3)), MatZ::Identity(3, 3));
  EXPECT_EQ(dual_basis(m_of(2, {1, 1, 0, 1})), m_of(2, {1, 0, -1, 1}));
  EXPECT_EQ(dual_basis(m_of(2, {1, -1, 0, 1})), m_of(2, {1, 0, 1, 1}));
  EXPECT_THROW(dual_basis(m_of(2, {2, 0, 0, 1})), PreconditionError);
}

TEST(DualBasis, Biorthogonal) {
  std::mt19937_64 rng(45);
  std::uniform_int_distribution<std::int64_t> entry(-4, 4);
  for (int k = 0; k < 50; ++k) {
    const int d = 2 + k % 3;
    MatZ f = MatZ::Identity(d, d);
    for (int s = 0; s < 5; ++s) {
      const int i = static_cast<int>(rng() % d);
      const int j = (i + 1) % d;
      f.row(i) += entry(rng) * f.row(j);
    }
    EXPECT_EQ(dual_basis(f) * f.transpose(), MatZ::Identity(d, d));
  }
}

TEST(MinimalBox, Examples) {
  const SlabBox k = diagonal_strip();
  const MinimalBox a = minimal_box(k, MatZ::Identity(2, 2));
  EXPECT_EQ(a.gamma, q({10, 10}));
  const MinimalBox b = minimal_box(k, m_of(2, {1, -1, 0, 1}));
  EXPECT_EQ(b.gamma, q({10, 2}));
  EXPECT_EQ(b.gamma.prod(), Rational(20));
  EXPECT_EQ(*exact_rational_volume(ConvexBody(k)), Rational(19));
  const SlabBox full = make_slab_box(q({1, 2}), Rational(-5), Rational(100), 7);
  EXPECT_EQ(minimal_box(full, MatZ::Identity(2, 2)).gamma, q({7, 7}));
}

TEST(MinimalBox, GreedyMatchesLpAndIsAttained) {
  for (std::uint64_t c = 0; c < 60; ++c) {
    Rng rng = case_rng(46, c);
    const int d = 2 + static_cast<int>(c % 3);
    const SlabBox slab = c % 2 ? random_slab_box(rng, std::min(d, 3)) : random_thin_strip(rng, d, 6);
    const Eigen::Index dim = slab.normal.size();
    MatZ f = MatZ::Identity(dim, dim);
    f.row(0) += 2 * f.row(dim - 1);
    f.row(dim - 1) -= f.row(0);
    const MatZ g = dual_basis(f);
    const MinimalBox box = minimal_box(slab, f);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const VecQ gi = to_rational(VecZ(g.row(i).transpose()));
      EXPECT_EQ(box.beta[i], lp_support(slab, gi));
      EXPECT_EQ(box.alpha[i], -lp_support(slab, VecQ(-gi)));
      // Attaining points lie in K.
      for (const VecQ* p : {&box.argmax[i], &box.argmin[i]}) {
        EXPECT_GE(p->minCoeff(), Rational(0));
        EXPECT_LE(p->maxCoeff(), Rational(slab.side));
        EXPECT_GE(slab.normal.dot(*p), slab.lower);
        EXPECT_LE(slab.normal.dot(*p), slab.upper);
      }
      EXPECT_EQ(gi.dot(box.argmax[i]), box.beta[i]);
      EXPECT_EQ(gi.dot(box.argmin[i]), box.alpha[i]);
    }
  }
}

TEST(WellPosition, Examples) {
  const WellPosition a = well_position(diagonal_strip());
  EXPECT_NEAR(a.ratio, 20.0 / 19.0, 1e-12);
  EXPECT_FALSE(a.used_fallback);
  const WellPosition b = well_position(make_slab_box(q({1, 0}), Rational(1), Rational(2), 2));
  EXPECT_EQ(b.ratio, 1.0);
  EXPECT_EQ(b.basis, MatZ::Identity(2, 2));
}

TEST(WellPosition, NeverWorseThanStandardBasis) {
  for (std::uint64_t c = 0; c < 60; ++c) {
    Rng rng = case_rng(47, c);
    const WellPosition w = well_position(random_thin_strip(rng, 2 + static_cast<int>(c % 3)));
    EXPECT_LE(w.ratio, w.standard_ratio);
    EXPECT_EQ(abs(det_of(w.basis)), Rational(1));
  }
}

TEST(BoundaryFCellEstimate, Examples) {
  EXPECT_EQ(boundary_fcell_estimate(q({10, 2})), Rational(32));
  EXPECT_EQ(boundary_fcell_estimate(q({0, 0})), Rational(8));
  EXPECT_EQ(boundary_fcell_estimate(q({1, 1, 1})), Rational(54));
}

TEST(BoundaryFCellEstimate, BoundsCountedBoundaryFCells) {
  const SlabBox k = diagonal_strip();
  const MatZ f = m_of(2, {1, -1, 0, 1});
  const ClassCounts counts = count_fcells(k, f);
  EXPECT_LE(Rational(counts.boundary), boundary_fcell_estimate(minimal_box(k, f).gamma));
}

TEST(CheckBasic, Examples) {
  const BasicCheck a = check_basic_inequality(diagonal_strip(), m_of(2, {1, -1, 0, 1}));
  EXPECT_TRUE(a.nondegenerate);
  EXPECT_EQ(a.lattice, BigInt(31));
  EXPECT_EQ(a.gap, Rational(12));
  EXPECT_EQ(a.bound, Rational(57, 5));
  EXPECT_NEAR(a.ratio, 12.0 / 11.4, 1e-12);

  const BasicCheck b = check_basic_inequality(make_slab_box(q({1, 0}), Rational(-1), Rational(20), 10), MatZ::Identity(2, 2));
  EXPECT_EQ(b.gap, Rational(21));
  EXPECT_EQ(b.bound, Rational(20));

  const BasicCheck c = check_basic_inequality(make_slab_box(q({1, 1}), Rational(-1), Rational(5), 1), MatZ::Identity(2, 2));
  EXPECT_EQ(c.gap, Rational(3));
  EXPECT_EQ(c.bound, Rational(2));
  EXPECT_NEAR(c.ratio, 1.5, 1e-15);
}

TEST(CheckBasic, DegenerateReportedNotThrown) {
  // No integer level lies in [1/4, 3/4].
  const BasicCheck a = check_basic_inequality(make_slab_box(q({1, 1}), Rational(1, 4), Rational(3, 4), 3), MatZ::Identity(2, 2));
  EXPECT_FALSE(a.nondegenerate);
  // Collinear lattice points only: the level x + y = 1 inside [3/4, 5/4].
  const BasicCheck b = check_basic_inequality(make_slab_box(q({1, 1}), Rational(3, 4), Rational(5, 4), 3), MatZ::Identity(2, 2));
  EXPECT_FALSE(b.nondegenerate);
  EXPECT_EQ(b.lattice, BigInt(2));
}
