#include "boxcells/numeric.hpp"

#include <charconv>
#include <limits>

#include <fmt/format.h>

namespace boxcells {

VecQ to_rational(const VecX& v) {
  VecQ out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = to_rational(v[i]);
  return out;
}

VecQ to_rational(const VecZ& v) {
  VecQ out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = Rational(v[i]);
  return out;
}

MatQ to_rational(const MatX& m) {
  MatQ out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_rational(m(i, j));
  return out;
}

MatQ to_rational(const MatZ& m) {
  MatQ out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

BigInt floor_rational(const Rational& q) {
  const BigInt num = numerator(q);
  const BigInt den = denominator(q);  // always positive
  BigInt quot = num / den;            // truncates toward zero
  if (num < 0 && quot * den != num) quot -= 1;
  return quot;
}

BigInt ceil_rational(const Rational& q) { return -floor_rational(-q); }

BigInt round_rational(const Rational& q) { return floor_rational(q + Rational(1, 2)); }

std::int64_t to_int64(const BigInt& z) {
  if (z > std::numeric_limits<std::int64_t>::max() || z < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("integer does not fit in 64 bits: " + z.str());
  }
  return z.convert_to<std::int64_t>();
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

std::string to_string(const BigInt& z) { return z.str(); }

std::string format_double(double x) { return fmt::format("{}", x); }

namespace {

BigInt parse_integer(std::string_view text) {
  if (text.empty()) throw PreconditionError("empty number");
  std::size_t pos = 0;
  if (text[0] == '+' || text[0] == '-') pos = 1;
  if (pos == text.size()) throw PreconditionError("malformed number: " + std::string(text));
  for (std::size_t i = pos; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') throw PreconditionError("malformed number: " + std::string(text));
  }
  std::string digits(text[0] == '+' ? text.substr(1) : text);
  return BigInt(digits);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_integer(trim(text.substr(0, slash)));
    const BigInt den = parse_integer(trim(text.substr(slash + 1)));
    if (den == 0) throw PreconditionError("zero denominator: " + std::string(text));
    return Rational(num, den);
  }
  // Decimal with optional exponent, converted without rounding.
  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    const std::string_view exp_text = text.substr(e + 1);
    const char* first = exp_text.data();
    const char* last = first + exp_text.size();
    if (!exp_text.empty() && exp_text.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc() || ptr != last) throw PreconditionError("malformed number: " + std::string(text));
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (char c : mantissa) {
    if (c == '.') {
      if (seen_point) throw PreconditionError("malformed number: " + std::string(text));
      seen_point = true;
    } else {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    }
  }
  if (digits == "-" || digits == "+" || digits.empty()) throw PreconditionError("malformed number: " + std::string(text));
  Rational value(parse_integer(digits));
  const long shift = exponent - frac_digits;
  if (std::abs(shift) > 4096) throw PreconditionError("exponent out of range: " + std::string(text));
  const Rational scale(ipow(BigInt(10), static_cast<unsigned>(std::abs(shift))));
  return shift >= 0 ? value * scale : value / scale;
}

VecQ parse_rational_list(std::string_view text) {
  std::vector<Rational> items;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    items.push_back(parse_rational(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  VecQ out(static_cast<Eigen::Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) out[static_cast<Eigen::Index>(i)] = items[i];
  return out;
}

std::vector<std::int64_t> parse_int_list(std::string_view text) {
  const VecQ values = parse_rational_list(text);
  std::vector<std::int64_t> out;
  for (const Rational& q : values) {
    if (denominator(q) != 1) throw PreconditionError("expected an integer, got " + to_string(q));
    out.push_back(to_int64(numerator(q)));
  }
  return out;
}

}  // namespace boxcells
