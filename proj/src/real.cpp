#include "sinefactor/real.hpp"

#include <cstdio>
#include <cstdlib>

#include "sinefactor/errors.hpp"

namespace sinefactor {

Real Real::from_string(const std::string& decimal, mpfr_prec_t prec) {
  Real r(prec);
  if (mpfr_set_str(r.v_, decimal.c_str(), 10, MPFR_RNDN) != 0 && mpfr_nan_p(r.v_)) {
    throw InvalidInput("not a decimal number: '" + decimal + "'");
  }
  return r;
}

Real Real::from_double(double x, mpfr_prec_t prec) {
  Real r(prec);
  mpfr_set_d(r.v_, x, MPFR_RNDN);
  return r;
}

Real Real::from_int(long long p, mpfr_prec_t prec) {
  Real r(prec);
  mpfr_set_si(r.v_, static_cast<long>(p), MPFR_RNDN);
  return r;
}

Real Real::from_ratio(long long p, long long q, mpfr_prec_t prec) {
  Real num = from_int(p, prec);
  Real den = from_int(q, prec);
  return num / den;
}

Real Real::pi(mpfr_prec_t prec) {
  Real r(prec);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

Real Real::sqrt_of(unsigned long n, mpfr_prec_t prec) {
  Real r(prec);
  mpfr_sqrt_ui(r.v_, n, MPFR_RNDN);
  return r;
}

Real Real::e(mpfr_prec_t prec) {
  Real one = from_int(1, prec);
  Real r(prec);
  mpfr_exp(r.v_, one.v_, MPFR_RNDN);
  return r;
}

std::string Real::to_string(int significant_digits) const {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Rg", significant_digits, v_);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

static mpfr_prec_t join_prec(const Real& a, const Real& b) {
  return a.prec() > b.prec() ? a.prec() : b.prec();
}

Real Real::operator+(const Real& o) const {
  Real r(join_prec(*this, o));
  mpfr_add(const_cast<mpfr_ptr>(r.raw()), v_, o.v_, MPFR_RNDN);
  return r;
}

Real Real::operator-(const Real& o) const {
  Real r(join_prec(*this, o));
  mpfr_sub(const_cast<mpfr_ptr>(r.raw()), v_, o.v_, MPFR_RNDN);
  return r;
}

Real Real::operator*(const Real& o) const {
  Real r(join_prec(*this, o));
  mpfr_mul(const_cast<mpfr_ptr>(r.raw()), v_, o.v_, MPFR_RNDN);
  return r;
}

Real Real::operator/(const Real& o) const {
  Real r(join_prec(*this, o));
  mpfr_div(const_cast<mpfr_ptr>(r.raw()), v_, o.v_, MPFR_RNDN);
  return r;
}

Real Real::operator-() const {
  Real r(prec());
  mpfr_neg(const_cast<mpfr_ptr>(r.raw()), v_, MPFR_RNDN);
  return r;
}

Real Real::abs() const {
  Real r(prec());
  mpfr_abs(const_cast<mpfr_ptr>(r.raw()), v_, MPFR_RNDN);
  return r;
}

void Real::add_mul(const Real& r, const Real& x) { mpfr_fma(v_, r.v_, x.v_, v_, MPFR_RNDN); }

}  // namespace sinefactor
