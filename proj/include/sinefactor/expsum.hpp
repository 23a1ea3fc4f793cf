#pragma once

#include <complex>
#include <map>
#include <vector>

#include "sinefactor/basis.hpp"

namespace sinefactor {

using Complex = std::complex<double>;

// A lazily computed value m * exp(log_scale); keeps evaluation finite when the
// true magnitude leaves the double range.
struct ScaledComplex {
  Complex mantissa{0.0, 0.0};
  double log_scale = 0.0;

  double log_abs() const;
  Complex value() const;  // throws OverflowSignal when out of range
  bool is_zero() const { return mantissa == Complex(0.0, 0.0); }
};

// Finite exponential sum  sum_w q_w exp(2*pi*i*w*z)  with exact frequency
// vectors over a shared basis and complex double coefficients. Immutable
// after construction.
class ExpSum {
 public:
  using TermMap = std::map<FreqVector, Complex>;

  explicit ExpSum(BasisPtr basis) : basis_(std::move(basis)) {}  // zero sum

  // Merges duplicate frequencies, drops exact-zero coefficients. Throws
  // EmptySum if nothing survives, BasisMismatch on wrong vector length.
  static ExpSum make(BasisPtr basis, const std::vector<std::pair<FreqVector, Complex>>& terms);

  // Same merging, but an empty result is allowed (used for derivatives).
  static ExpSum make_allow_empty(BasisPtr basis,
                                 const std::vector<std::pair<FreqVector, Complex>>& terms);

  const BasisPtr& basis() const { return basis_; }
  const TermMap& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  Complex coeff(const FreqVector& v) const;

  ScaledComplex evaluate_scaled(Complex z) const;
  Complex evaluate(Complex z) const;
  double log_abs_sum(Complex z) const;  // log of sum_w |q_w exp(2 pi i w z)|, a local scale

  ExpSum derivative() const;
  ExpSum multiply(const ExpSum& other) const;
  ExpSum plus(const ExpSum& other) const;
  ExpSum scaled(Complex factor) const;

  struct Extremes {
    FreqVector min_vec, max_vec;
    double min_value, max_value;
  };
  Extremes spectrum_extremes() const;  // throws EmptySum

  bool same_terms(const ExpSum& other, double coeff_tol = 0.0) const;

 private:
  struct EvalTerm {
    double omega;
    Complex q;
    double log_abs_q;
  };
  void finalize();

  BasisPtr basis_;
  TermMap terms_;
  std::vector<EvalTerm> eval_;  // built at construction, sorted by omega
};

// largest coefficient difference over the union of both spectra
double max_union_coeff_diff(const ExpSum& a, const ExpSum& b);

}  // namespace sinefactor
