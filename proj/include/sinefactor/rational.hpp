#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "sinefactor/errors.hpp"

namespace sinefactor {

// Exact rational with 64-bit numerator/denominator, normalized so den > 0 and
// gcd(|num|, den) == 1. Products go through __int128 and throw on overflow;
// at desk scale (semigroup combinations, subset sums) this never fires.
struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  Rational() = default;
  Rational(int64_t n) : num(n), den(1) {}
  Rational(int64_t n, int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw ArithmeticOverflow("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) {
      den = 1;
      return;
    }
    int64_t g = std::gcd(num < 0 ? -num : num, den);
    num /= g;
    den /= g;
  }

  static int64_t narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw ArithmeticOverflow("rational arithmetic overflow");
    return static_cast<int64_t>(v);
  }

  Rational operator+(const Rational& o) const {
    __int128 n = static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
    __int128 d = static_cast<__int128>(den) * o.den;
    return reduce128(n, d);
  }
  Rational operator-(const Rational& o) const {
    __int128 n = static_cast<__int128>(num) * o.den - static_cast<__int128>(o.num) * den;
    __int128 d = static_cast<__int128>(den) * o.den;
    return reduce128(n, d);
  }
  Rational operator*(const Rational& o) const {
    __int128 n = static_cast<__int128>(num) * o.num;
    __int128 d = static_cast<__int128>(den) * o.den;
    return reduce128(n, d);
  }
  Rational operator/(const Rational& o) const {
    if (o.num == 0) throw ArithmeticOverflow("rational division by zero");
    __int128 n = static_cast<__int128>(num) * o.den;
    __int128 d = static_cast<__int128>(den) * o.num;
    return reduce128(n, d);
  }
  Rational operator-() const {
    Rational r;
    r.num = -num;
    r.den = den;
    return r;
  }

  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const {
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
  }
  bool operator>(const Rational& o) const { return o < *this; }
  bool is_zero() const { return num == 0; }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string to_string() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  // Accepts "p", "p/q" and plain decimals like "-0.75" (converted exactly).
  static Rational parse(const std::string& text);

 private:
  static Rational reduce128(__int128 n, __int128 d) {
    if (d == 0) throw ArithmeticOverflow("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a != 0) {
      n /= a;
      d /= a;
    } else {
      d = 1;
    }
    Rational r;
    r.num = narrow(n);
    r.den = narrow(d);
    return r;
  }
};

inline Rational Rational::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    int64_t p = std::stoll(text.substr(0, slash));
    int64_t q = std::stoll(text.substr(slash + 1));
    return Rational(p, q);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  size_t frac_len = text.size() - dot - 1;
  if (frac_len > 17) throw ArithmeticOverflow("decimal literal too long for exact rational: " + text);
  int64_t p = std::stoll(digits);
  int64_t q = 1;
  for (size_t i = 0; i < frac_len; ++i) q *= 10;
  return Rational(p, q);
}

}  // namespace sinefactor
