#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace boxcells {

namespace mp = boost::multiprecision;

/// Exact rational and integer types. Expression templates are disabled so the
/// types behave like plain values inside Eigen expressions and `auto`.
using Rational = mp::number<mp::gmp_rational, mp::et_off>;
using BigInt = mp::number<mp::gmp_int, mp::et_off>;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VecX = Vec<double>;
using MatX = Mat<double>;
using VecQ = Vec<Rational>;
using MatQ = Mat<Rational>;
using VecZ = Vec<std::int64_t>;
using MatZ = Mat<std::int64_t>;

/// A violated precondition of a public operation (bad dimension, zero vector,
/// infeasible parameters). The CLI maps this to exit status 2.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename Scalar>
inline constexpr bool is_exact_v = !std::is_floating_point_v<Scalar>;

template <typename Scalar>
Scalar ipow(Scalar base, unsigned exponent) {
  Scalar result(1);
  while (exponent != 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent != 0) base *= base;
  }
  return result;
}

template <typename Scalar>
Scalar factorial(unsigned k) {
  Scalar result(1);
  for (unsigned i = 2; i <= k; ++i) result *= Scalar(i);
  return result;
}

template <typename Scalar>
Scalar binomial(unsigned n, unsigned k) {
  if (k > n) return Scalar(0);
  Scalar result(1);
  for (unsigned i = 1; i <= k; ++i) {
    result *= Scalar(n - k + i);
    result /= Scalar(i);
  }
  return result;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(const BigInt& z) { return z.convert_to<double>(); }
inline double to_double(double x) { return x; }

template <typename Scalar>
Vec<double> to_double(const Vec<Scalar>& v) {
  Vec<double> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

/// Exact conversion (every finite double is a dyadic rational).
inline Rational to_rational(double x) {
  if (!std::isfinite(x)) throw PreconditionError("non-finite value has no rational form");
  return Rational(x);
}

VecQ to_rational(const VecX& v);
VecQ to_rational(const VecZ& v);
MatQ to_rational(const MatX& m);
MatQ to_rational(const MatZ& m);

BigInt floor_rational(const Rational& q);
BigInt ceil_rational(const Rational& q);
/// Nearest integer, halves rounded up.
BigInt round_rational(const Rational& q);

std::int64_t to_int64(const BigInt& z);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);
/// 17 significant digits.
std::string format_double(double x);

/// Parses "p/q", an integer, or a finite decimal ("0.25", "-1e-3") exactly.
Rational parse_rational(std::string_view text);
/// Parses a comma-separated list of rationals.
VecQ parse_rational_list(std::string_view text);
std::vector<std::int64_t> parse_int_list(std::string_view text);

/// Neumaier-compensated accumulator for double; plain accumulation for exact
/// scalars, where no rounding happens.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(const Scalar& x) { sum_ += x; }
  Scalar value() const { return sum_; }

 private:
  Scalar sum_{0};
};

template <>
class CompensatedSum<double> {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace boxcells
