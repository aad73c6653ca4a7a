#pragma once

// Exact arithmetic vocabulary shared by every module: arbitrary precision
// integers and rationals, exact conversion from binary floating point, and
// the "num/den" text form used in reports.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lulab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

/// Exact value of a finite double, read off its binary representation.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value has no rational form");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent, |mantissa| in [0.5, 1)
  constexpr int kBits = std::numeric_limits<double>::digits;
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, kBits));
  exponent -= kBits;
  Rational r{BigInt(scaled)};
  if (exponent > 0) {
    r *= Rational(BigInt(1) << exponent);
  } else if (exponent < 0) {
    r /= Rational(BigInt(1) << -exponent);
  }
  return r;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// "num/den" (or "num" when the denominator is 1).
inline std::string to_string(const Rational& q) {
  const BigInt den = denominator(q);
  if (den == 1) return numerator(q).str();
  return numerator(q).str() + "/" + den.str();
}

inline std::string to_string(const BigInt& z) { return z.str(); }

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline BigInt parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
  BigInt value = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
    value = value * 10 + (c - '0');
  }
  return negative ? BigInt(-value) : value;
}

inline Rational parse_decimal(std::string_view s, std::string_view whole) {
  std::string_view mant = s;
  long long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mant = s.substr(0, e);
    exp10 = static_cast<long long>(parse_integer(s.substr(e + 1), whole));
  }
  bool negative = false;
  if (!mant.empty() && (mant.front() == '+' || mant.front() == '-')) {
    negative = mant.front() == '-';
    mant.remove_prefix(1);
  }
  const auto dot = mant.find('.');
  std::string digits(mant.substr(0, dot));
  if (dot != std::string_view::npos) {
    const auto frac = mant.substr(dot + 1);
    digits += frac;
    exp10 -= static_cast<long long>(frac.size());
  }
  if (digits.empty()) throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
  Rational value{parse_integer(digits, whole)};
  const BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 > 0) value *= Rational(scale);
  if (exp10 < 0) value /= Rational(scale);
  return negative ? Rational(-value) : value;
}

}  // namespace detail

/// Parses "p/q", an integer, or a decimal such as "0.7" or "1e-3". Decimal
/// text is read exactly in base ten, so "0.7" is 7/10.
inline Rational parse_rational(std::string_view text) {
  const std::string_view s = detail::trim(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const BigInt num = detail::parse_integer(detail::trim(s.substr(0, slash)), text);
    const BigInt den = detail::parse_integer(detail::trim(s.substr(slash + 1)), text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  return detail::parse_decimal(s, text);
}

inline Rational ipow(const Rational& base, unsigned exponent) {
  return Rational(boost::multiprecision::pow(numerator(base), exponent),
                  boost::multiprecision::pow(denominator(base), exponent));
}

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace lulab
