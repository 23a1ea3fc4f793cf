#pragma once

#include <mpfr.h>

#include <complex>
#include <string>
#include <utility>

namespace sinefactor {

// RAII wrapper around an mpfr_t. Binary operations round to the larger of the
// two operand precisions; everything is value-semantic and immutable from the
// outside, so Reals can be shared freely across threads.
class Real {
 public:
  static constexpr mpfr_prec_t kDefaultPrec = 384;  // ~115 decimal digits

  explicit Real(mpfr_prec_t prec = kDefaultPrec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real from_string(const std::string& decimal, mpfr_prec_t prec = kDefaultPrec);
  static Real from_double(double x, mpfr_prec_t prec = kDefaultPrec);
  static Real from_int(long long p, mpfr_prec_t prec = kDefaultPrec);
  static Real from_ratio(long long p, long long q, mpfr_prec_t prec = kDefaultPrec);
  static Real pi(mpfr_prec_t prec = kDefaultPrec);
  static Real sqrt_of(unsigned long n, mpfr_prec_t prec = kDefaultPrec);
  static Real e(mpfr_prec_t prec = kDefaultPrec);

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  std::string to_string(int significant_digits = 70) const;
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  int cmp(const Real& o) const { return mpfr_cmp(v_, o.v_); }
  bool operator<(const Real& o) const { return cmp(o) < 0; }
  bool operator>(const Real& o) const { return cmp(o) > 0; }
  bool operator==(const Real& o) const { return cmp(o) == 0; }
  bool operator<=(const Real& o) const { return cmp(o) <= 0; }
  bool operator>=(const Real& o) const { return cmp(o) >= 0; }

  Real operator+(const Real& o) const;
  Real operator-(const Real& o) const;
  Real operator*(const Real& o) const;
  Real operator/(const Real& o) const;
  Real operator-() const;
  Real abs() const;

  // *this += r * x, rounded at this value's precision.
  void add_mul(const Real& r, const Real& x);

  mpfr_srcptr raw() const { return v_; }

 private:
  mpfr_t v_;
};

}  // namespace sinefactor
