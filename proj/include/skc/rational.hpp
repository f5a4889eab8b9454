#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "skc/error.hpp"

namespace skc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw ArgumentError("zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

/// "p/q" in lowest terms; integers render without a denominator.
inline std::string to_string(const Rational& r) {
  const BigInt& num = boost::multiprecision::numerator(r);
  const BigInt& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Accepts "p/q" or an integer "p" (optionally signed).
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> BigInt {
    if (s.empty()) throw ParseError("malformed rational '" + std::string(text) + "'");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) throw ParseError("malformed rational '" + std::string(text) + "'");
    for (std::size_t i = start; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') {
        throw ParseError("malformed rational '" + std::string(text) + "'");
      }
    }
    return BigInt(std::string(s));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

/// Best rational approximation of x with denominator at most max_den
/// (continued-fraction convergents plus the best semiconvergent).
inline Rational approximate(double x, const BigInt& max_den) {
  if (!std::isfinite(x)) throw ArgumentError("cannot approximate a non-finite value");
  const bool negative = x < 0;
  double rem = std::fabs(x);
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    double a_floor = std::floor(rem);
    BigInt a(static_cast<long long>(a_floor));
    BigInt q2 = a * q1 + q0;
    if (q2 > max_den) {
      // Largest admissible semiconvergent; keep it only if it beats p1/q1.
      BigInt k = (max_den - q0) / q1;
      BigInt ps = k * p1 + p0;
      BigInt qs = k * q1 + q0;
      Rational semi(ps, qs);
      Rational conv(p1, q1);
      Rational target(std::fabs(x));
      Rational best = abs(semi - target) < abs(conv - target) ? semi : conv;
      return negative ? Rational(-best) : best;
    }
    BigInt p2 = a * p1 + p0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = rem - a_floor;
    if (frac < 1e-300) break;
    rem = 1.0 / frac;
    if (!std::isfinite(rem)) break;
  }
  Rational out(p1, q1);
  return negative ? Rational(-out) : out;
}

/// Returns k when p == 2^k, nothing otherwise.
inline std::optional<long> exact_log2(const Rational& p) {
  if (p <= 0) return std::nullopt;
  const BigInt& num = boost::multiprecision::numerator(p);
  const BigInt& den = boost::multiprecision::denominator(p);
  auto is_pow2 = [](const BigInt& v) { return v > 0 && (v & (v - 1)) == 0; };
  if (num == 1 && is_pow2(den)) return -static_cast<long>(boost::multiprecision::msb(den));
  if (den == 1 && is_pow2(num)) return static_cast<long>(boost::multiprecision::msb(num));
  return std::nullopt;
}

/// An information quantity in bits. `exact` is present whenever every
/// ingredient had a rational value (ranks, dyadic probabilities).
struct Bits {
  double value = 0.0;
  std::optional<Rational> exact;

  static Bits from_exact(const Rational& r) { return Bits{to_double(r), r}; }
  static Bits approximate_only(double v) { return Bits{v, std::nullopt}; }

  friend Bits operator+(const Bits& a, const Bits& b) {
    Bits out{a.value + b.value, std::nullopt};
    if (a.exact && b.exact) out.exact = *a.exact + *b.exact;
    return out;
  }
  friend Bits operator-(const Bits& a, const Bits& b) {
    Bits out{a.value - b.value, std::nullopt};
    if (a.exact && b.exact) out.exact = *a.exact - *b.exact;
    return out;
  }
  friend Bits operator*(const Rational& w, const Bits& b) {
    Bits out{to_double(w) * b.value, std::nullopt};
    if (b.exact) out.exact = w * *b.exact;
    return out;
  }
};

}  // namespace skc
