#pragma once

#include <optional>

#include "sinefactor/expsum.hpp"

namespace sinefactor {

// The target representation  C * exp(i*a*z) * prod_j sin^{k_j}(alpha_j z + beta_j).
// alpha_j is carried both as a double and as the exact vector of alpha_j / pi
// over the basis, so recovered factors stay exactly comparable.
struct SineProductForm {
  struct Factor {
    FreqVector alpha_over_pi;
    double alpha = 0.0;
    double beta = 0.0;  // canonical range [0, pi)
    int multiplicity = 1;
  };

  BasisPtr basis;
  Complex C{1.0, 0.0};
  double a = 0.0;
  std::optional<FreqVector> a_over_2pi;  // required by build_sine_product when a != 0
  std::vector<Factor> factors;

  Complex evaluate(Complex z) const;
  int total_degree() const;
  double alpha_sum() const;  // sum of k_j * alpha_j

  // beta into [0, pi) with the sign flip absorbed into C; factors with equal
  // (alpha, beta) merged; sorted by alpha ascending.
  void canonicalize();

  std::string render() const;  // human-readable "C * e^{iaz} * sin^k(...)..."
};

}  // namespace sinefactor
