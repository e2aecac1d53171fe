#include <gtest/gtest.h>

#include <map>
#include <random>

#include "boxcells/geometry.hpp"
#include "boxcells/lattice_count.hpp"

using namespace boxcells;

namespace {

VecZ z_of(std::initializer_list<std::int64_t> xs) {
  VecZ v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v[i++] = x;
  return v;
}

template <typename Fn>
void for_each_grid_point(Eigen::Index d, std::int64_t n, Fn&& fn) {
  VecZ x = VecZ::Zero(d);
  while (true) {
    fn(x);
    Eigen::Index i = 0;
    while (i < d && x[i] == n - 1) x[i++] = 0;
    if (i == d) return;
    ++x[i];
  }
}

std::map<std::int64_t, std::int64_t> brute_levels(const VecZ& z, std::int64_t n) {
  std::map<std::int64_t, std::int64_t> r;
  for_each_grid_point(z.size(), n, [&](const VecZ& x) { ++r[z.dot(x)]; });
  return r;
}

// A hyperplane meets the open cell iff t lies strictly between the extreme
// values of v.x over the cell's vertices.
std::int64_t brute_cells(const VecQ& v, const Rational& t, std::int64_t n) {
  std::int64_t count = 0;
  for_each_grid_point(v.size(), n, [&](const VecZ& x) {
    Rational lo(0);
    Rational hi(0);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const Rational a = v[i] * x[i];
      const Rational b = v[i] * (x[i] + 1);
      lo += std::min(a, b);
      hi += std::max(a, b);
    }
    if (lo < t && t < hi) ++count;
  });
  return count;
}

std::vector<std::int64_t> as_ints(const LevelCounts& levels) {
  std::vector<std::int64_t> out;
  for (const auto& c : levels.counts) out.push_back(to_int64(c));
  return out;
}

}  // namespace

TEST(NormalizePrimitive, Examples) {
  EXPECT_EQ(normalize_primitive(z_of({2, -4})).z, z_of({1, 2}));
  EXPECT_EQ(normalize_primitive(z_of({0, 3})).z, z_of({0, 1}));
  EXPECT_EQ(normalize_primitive(z_of({1, 1})).z, z_of({1, 1}));
  EXPECT_THROW(normalize_primitive(z_of({0, 0})), PreconditionError);
}

TEST(LevelCounts, Examples) {
  const LevelCounts a = level_counts(z_of({1, 1}), 3);
  EXPECT_EQ(a.hmin, 0);
  EXPECT_EQ(as_ints(a), (std::vector<std::int64_t>{1, 2, 3, 2, 1}));
  EXPECT_EQ(as_ints(level_counts(z_of({1, 0}), 2)), (std::vector<std::int64_t>{2, 2}));
  EXPECT_EQ(as_ints(level_counts(z_of({1, 2}), 3)), (std::vector<std::int64_t>{1, 1, 2, 1, 2, 1, 1}));
}

TEST(LevelCounts, MatchesEnumeration) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> entry(-5, 5);
  for (int k = 0; k < 300; ++k) {
    const int d = 1 + k % 3;
    const std::int64_t n = 1 + k % 7;
    VecZ z(d);
    do {
      for (int i = 0; i < d; ++i) z[i] = entry(rng);
    } while ((z.array() == 0).all());
    const LevelCounts levels = level_counts(z, n);
    const auto oracle = brute_levels(z, n);
    EXPECT_EQ(levels.hmin, oracle.begin()->first);
    EXPECT_EQ(levels.hmax(), oracle.rbegin()->first);
    for (std::int64_t h = levels.hmin; h <= levels.hmax(); ++h) {
      const auto it = oracle.find(h);
      EXPECT_EQ(levels.at(h), BigInt(it == oracle.end() ? 0 : it->second));
    }
  }
}

TEST(LevelCounts, TotalIsGridSizeEvenBeyondInt64) {
  const LevelCounts big = level_counts(z_of({1, 1, 1, 1, 1}), 20000);
  EXPECT_EQ(big.total(), ipow(BigInt(20000), 5));
}

TEST(StripCountMax, Examples) {
  EXPECT_EQ(strip_count_max(normalize_primitive(z_of({1, 1})), 3).count, BigInt(5));
  EXPECT_EQ(strip_count_max(normalize_primitive(z_of({1, 1, 1})), 2).count, BigInt(7));
  EXPECT_EQ(strip_count_max(normalize_primitive(z_of({1, 2})), 3).count, BigInt(5));
}

TEST(StripCountMax, EqualsBestHyperplaneByEnumeration) {
  for (const VecZ& z : {z_of({1, 1}), z_of({1, 2}), z_of({2, 3}), z_of({1, 1, 1}), z_of({1, 1, 2})}) {
    for (std::int64_t n = 1; n <= 5; ++n) {
      std::int64_t best = 0;
      const std::int64_t top = n * z.sum();
      for (std::int64_t k = -1; k <= top + 1; ++k) {
        best = std::max(best, brute_cells(to_rational(z), Rational(2 * k + 1, 2), n));
      }
      EXPECT_EQ(strip_count_max(normalize_primitive(z), n).count, BigInt(best)) << z.transpose() << " n=" << n;
    }
  }
}

TEST(StripCountMax, MonotoneInN) {
  const LatticeDirection z = normalize_primitive(z_of({1, 2, 2}));
  BigInt last(0);
  for (std::int64_t n = 1; n <= 30; ++n) {
    const BigInt m = strip_count_max(z, n).count;
    EXPECT_GE(m, last);
    last = m;
  }
}

TEST(CellsIntersected, Examples) {
  EXPECT_EQ(cells_intersected(to_rational(z_of({1, 0})), Rational(1, 2), 3), BigInt(3));
  EXPECT_EQ(cells_intersected(to_rational(z_of({1, 1})), Rational(5, 2), 3), BigInt(5));
  EXPECT_EQ(cells_intersected(to_rational(z_of({1, 1, 1})), Rational(7, 2), 2), BigInt(7));
}

TEST(CellsIntersected, MatchesEnumeration) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> entry(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  for (int k = 0; k < 400; ++k) {
    const int d = 1 + k % 3;
    const std::int64_t n = 1 + k % 6;
    VecQ v(d);
    do {
      for (int i = 0; i < d; ++i) v[i] = Rational(entry(rng), den(rng));
    } while ((v.array() == Rational(0)).all());
    Rational span(0);
    for (int i = 0; i < d; ++i) span += abs(v[i]);
    std::uniform_int_distribution<int> level(-2 * 12, 2 * 12);
    // Levels on a 1/12 grid so both integer and fractional cases occur.
    const Rational t = Rational(level(rng), 12) * span * n / 2 + v.sum() * n / 2;
    EXPECT_EQ(cells_intersected(v, t, n), BigInt(brute_cells(v, t, n))) << v.transpose() << " t=" << t;
  }
}

TEST(PrimitiveScaling, RecoversDirection) {
  const VecQ v = (VecQ(3) << Rational(1, 2), Rational(-3, 4), Rational(0)).finished();
  const PrimitiveScaling s = primitive_scaling(v);
  EXPECT_EQ(s.normal, z_of({2, -3, 0}));
  EXPECT_EQ(s.scale, Rational(1, 4));
}

TEST(BestDirectionSearch, Examples) {
  const SearchResult a = best_direction_search(2, 5, 5);
  EXPECT_EQ(a.best.z, z_of({1, 1}));
  EXPECT_EQ(a.count, BigInt(9));
  const SearchResult b = best_direction_search(2, 1, 3);
  EXPECT_EQ(b.count, BigInt(1));
  // (1,1,1) reaches 34 but (2,3,3) cuts 35 cells; both checked by enumeration below.
  const SearchResult c = best_direction_search(3, 4, 4);
  EXPECT_EQ(strip_count_max(normalize_primitive(z_of({1, 1, 1})), 4).count, BigInt(34));
  EXPECT_EQ(c.best.z, z_of({2, 3, 3}));
  EXPECT_EQ(c.count, BigInt(35));
  std::int64_t brute = 0;
  for (std::int64_t k = -1; k <= 4 * 8; ++k) brute = std::max(brute, brute_cells(to_rational(z_of({2, 3, 3})), Rational(2 * k + 1, 2), 4));
  EXPECT_EQ(brute, 35);
}

TEST(BestDirectionSearch, SortedCandidatesSufficeAgainstFullEnumeration) {
  // Full enumeration over all nonnegative primitive z, unsorted.
  const std::int64_t n = 4;
  const std::int64_t zmax = 3;
  BigInt best(0);
  for (std::int64_t a = 0; a <= zmax; ++a)
    for (std::int64_t b = 0; b <= zmax; ++b)
      for (std::int64_t c = 0; c <= zmax; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        if (std::gcd(std::gcd(a, b), c) != 1) continue;
        best = std::max(best, strip_count_max(normalize_primitive(z_of({a, b, c})), n).count);
      }
  EXPECT_EQ(best_direction_search(3, n, zmax).count, best);
}

TEST(ExactNdSmall, ChessboardValues) {
  EXPECT_EQ(exact_nd_small(2, 1, 1), BigInt(1));
  EXPECT_EQ(exact_nd_small(2, 7, 7), BigInt(13));
  EXPECT_EQ(exact_nd_small(2, 12, 12), BigInt(23));
  EXPECT_THROW(exact_nd_small(3, 5, 5), PreconditionError);
  EXPECT_THROW(exact_nd_small(2, 5, 4), PreconditionError);
}

TEST(ConvergenceTable, Examples) {
  const auto a = convergence_table(normalize_primitive(z_of({1, 1})), {10});
  ASSERT_EQ(a.size(), 1u);
  EXPECT_NEAR(a[0].ratio, 1.9, 1e-12);
  EXPECT_EQ(a[0].vd_exact, Rational(2));
  EXPECT_NEAR(a[0].gap, 0.1, 1e-12);
  const auto b = convergence_table(normalize_primitive(z_of({1, 1, 1})), {100});
  EXPECT_LE(b[0].gap, 3.0 / 100);
  const auto c = convergence_table(normalize_primitive(z_of({1, 0})), {10});
  EXPECT_NEAR(c[0].ratio, 1.0, 1e-15);
  EXPECT_EQ(c[0].gap, 0.0);
}
