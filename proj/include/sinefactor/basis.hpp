#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sinefactor/rational.hpp"
#include "sinefactor/real.hpp"

namespace sinefactor {

// Exact frequency: a rational coordinate vector over the entries of a
// FrequencyBasis. Equality of frequencies is equality of vectors.
struct FreqVector {
  std::vector<Rational> coeffs;

  FreqVector() = default;
  explicit FreqVector(size_t n) : coeffs(n) {}
  explicit FreqVector(std::vector<Rational> c) : coeffs(std::move(c)) {}

  size_t size() const { return coeffs.size(); }
  bool is_zero() const {
    for (const auto& c : coeffs)
      if (!c.is_zero()) return false;
    return true;
  }

  FreqVector operator+(const FreqVector& o) const {
    FreqVector r(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] = coeffs[i] + o.coeffs[i];
    return r;
  }
  FreqVector operator-(const FreqVector& o) const {
    FreqVector r(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] = coeffs[i] - o.coeffs[i];
    return r;
  }
  FreqVector operator-() const {
    FreqVector r(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] = -coeffs[i];
    return r;
  }
  FreqVector scaled(const Rational& s) const {
    FreqVector r(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] = coeffs[i] * s;
    return r;
  }

  bool operator==(const FreqVector& o) const { return coeffs == o.coeffs; }
  bool operator!=(const FreqVector& o) const { return !(*this == o); }
  bool operator<(const FreqVector& o) const {  // lexicographic; exact
    for (size_t i = 0; i < coeffs.size() && i < o.coeffs.size(); ++i) {
      if (coeffs[i] < o.coeffs[i]) return true;
      if (o.coeffs[i] < coeffs[i]) return false;
    }
    return coeffs.size() < o.coeffs.size();
  }

  std::string to_string() const;

  static FreqVector unit(size_t n, size_t index, const Rational& c = Rational(1)) {
    FreqVector v(n);
    v.coeffs[index] = c;
    return v;
  }
};

struct FreqVectorHash {
  size_t operator()(const FreqVector& v) const {
    size_t h = 1469598103934665603ull;
    for (const auto& c : v.coeffs) {
      h = (h ^ static_cast<size_t>(c.num)) * 1099511628211ull;
      h = (h ^ static_cast<size_t>(c.den)) * 1099511628211ull;
    }
    return h;
  }
};

// Diagnostic sink for near-collision warnings (two distinct vectors whose
// values agree to better than 1e-40). Defaults to stderr.
void set_diagnostic_sink(std::function<void(const std::string&)> sink);
void emit_diagnostic(const std::string& message);

// Ordered list of named positive reals over which frequencies are expressed.
// Values are held at high precision so that ordering and near-collision
// detection are meaningful well past double precision. Independence of the
// entries over the rationals is the caller's assertion, not verified.
class FrequencyBasis {
 public:
  struct Entry {
    std::string name;
    std::string decimal;  // as declared, kept verbatim for serialization
    Real value;
  };

  FrequencyBasis(std::vector<std::pair<std::string, std::string>> entries,
                 bool independence_claimed = true, mpfr_prec_t prec = Real::kDefaultPrec);

  size_t size() const { return entries_.size(); }
  const Entry& entry(size_t i) const { return entries_[i]; }
  std::optional<size_t> index_of(const std::string& name) const;
  bool independence_claimed() const { return independence_claimed_; }
  mpfr_prec_t precision() const { return prec_; }

  Real value_of(const FreqVector& v) const;
  double value_double(const FreqVector& v) const;

  // Warns through the diagnostic sink if a != b but |value(a) - value(b)| < 1e-40.
  // Returns the exact comparison of values.
  int compare_values(const FreqVector& a, const FreqVector& b) const;

  bool same_as(const FrequencyBasis& o) const;

 private:
  std::vector<Entry> entries_;
  bool independence_claimed_;
  mpfr_prec_t prec_;
  Real near_tol_;
};

using BasisPtr = std::shared_ptr<const FrequencyBasis>;

BasisPtr make_basis(std::vector<std::pair<std::string, std::string>> entries,
                    bool independence_claimed = true, mpfr_prec_t prec = Real::kDefaultPrec);

// 110-digit decimal strings for common constants, computed once with MPFR.
std::string builtin_constant_decimal(const std::string& name);  // pi, sqrt2, sqrt3, sqrt5, e
bool is_builtin_constant(const std::string& name);

}  // namespace sinefactor
