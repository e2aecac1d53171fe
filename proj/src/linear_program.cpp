#include "boxcells/linear_program.hpp"

#include <vector>

namespace boxcells {

namespace {

// Dictionary layout: rows 0..m-1 are constraints, row m the objective and row
// m+1 the phase-one objective; column n is the auxiliary variable, column n+1
// the right-hand side. Basic and nonbasic variable ids are kept in B and N.
class Dictionary {
 public:
  Dictionary(const MatQ& A, const VecQ& b, const VecQ& c)
      : m_(A.rows()), n_(A.cols()), D_(MatQ::Zero(m_ + 2, n_ + 2)), B_(m_), N_(n_ + 1) {
    for (Eigen::Index i = 0; i < m_; ++i) {
      for (Eigen::Index j = 0; j < n_; ++j) D_(i, j) = A(i, j);
      B_[i] = n_ + i;
      D_(i, n_) = -1;
      D_(i, n_ + 1) = b[i];
    }
    for (Eigen::Index j = 0; j < n_; ++j) {
      N_[j] = j;
      D_(m_, j) = -c[j];
    }
    N_[n_] = -1;
    D_(m_ + 1, n_) = 1;
  }

  LpResult solve() {
    LpResult result;
    Eigen::Index r = 0;
    for (Eigen::Index i = 1; i < m_; ++i) {
      if (D_(i, n_ + 1) < D_(r, n_ + 1)) r = i;
    }
    if (m_ > 0 && D_(r, n_ + 1) < 0) {
      pivot(r, n_);
      if (!run(1) || D_(m_ + 1, n_ + 1) < 0) {
        result.status = LpStatus::infeasible;
        return result;
      }
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (B_[i] != -1) continue;
        Eigen::Index s = -1;
        for (Eigen::Index j = 0; j <= n_; ++j) {
          if (D_(i, j) != 0 && (s == -1 || N_[j] < N_[s])) s = j;
        }
        if (s != -1) pivot(i, s);
      }
    }
    if (!run(2)) {
      result.status = LpStatus::unbounded;
      return result;
    }
    result.status = LpStatus::optimal;
    result.x = VecQ::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (B_[i] >= 0 && B_[i] < n_) result.x[B_[i]] = D_(i, n_ + 1);
    }
    result.value = D_(m_, n_ + 1);
    return result;
  }

 private:
  void pivot(Eigen::Index r, Eigen::Index s) {
    const Rational inv = Rational(1) / D_(r, s);
    for (Eigen::Index i = 0; i < m_ + 2; ++i) {
      if (i == r || D_(i, s) == 0) continue;
      const Rational factor = D_(i, s) * inv;
      for (Eigen::Index j = 0; j < n_ + 2; ++j) {
        if (j != s) D_(i, j) -= D_(r, j) * factor;
      }
      D_(i, s) = -factor;
    }
    for (Eigen::Index j = 0; j < n_ + 2; ++j) {
      if (j != s) D_(r, j) *= inv;
    }
    D_(r, s) = inv;
    std::swap(B_[r], N_[s]);
  }

  // Bland's rule: smallest variable id among improving columns, and among
  // tied ratio rows the smallest basic id.
  bool run(int phase) {
    const Eigen::Index obj = phase == 1 ? m_ + 1 : m_;
    while (true) {
      Eigen::Index s = -1;
      for (Eigen::Index j = 0; j <= n_; ++j) {
        if (phase == 2 && N_[j] == -1) continue;
        if (D_(obj, j) < 0 && (s == -1 || N_[j] < N_[s])) s = j;
      }
      if (s == -1) return true;
      Eigen::Index r = -1;
      Rational best_ratio;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (D_(i, s) <= 0) continue;
        const Rational ratio = D_(i, n_ + 1) / D_(i, s);
        if (r == -1 || ratio < best_ratio || (ratio == best_ratio && B_[i] < B_[r])) {
          r = i;
          best_ratio = ratio;
        }
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  Eigen::Index m_;
  Eigen::Index n_;
  MatQ D_;
  std::vector<Eigen::Index> B_;
  std::vector<Eigen::Index> N_;
};

}  // namespace

LpResult maximize(const MatQ& A, const VecQ& b, const VecQ& c) {
  if (A.rows() != b.size() || A.cols() != c.size()) throw PreconditionError("LP dimensions do not match");
  return Dictionary(A, b, c).solve();
}

LpResult maximize_free(const MatQ& A, const VecQ& b, const VecQ& c) {
  const Eigen::Index n = A.cols();
  MatQ split(A.rows(), 2 * n);
  split << A, -A;
  VecQ cost(2 * n);
  cost << c, -c;
  LpResult result = maximize(split, b, cost);
  if (result.status == LpStatus::optimal) {
    const VecQ x = result.x.head(n) - result.x.tail(n);
    result.x = x;
  }
  return result;
}

bool box_meets_polyhedron(const MatQ& A, const VecQ& b, const VecQ& lower, const VecQ& upper) {
  const Eigen::Index d = A.cols();
  if (lower.size() != d || upper.size() != d) throw PreconditionError("box dimension mismatch");
  MatQ stacked(A.rows() + d, d);
  stacked << A, MatQ::Identity(d, d);
  VecQ rhs(A.rows() + d);
  rhs << b - A * lower, upper - lower;
  return maximize(stacked, rhs, VecQ::Zero(d)).status != LpStatus::infeasible;
}

}  // namespace boxcells
