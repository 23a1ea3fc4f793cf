#pragma once

#include <cstdint>

#include "sinefactor/expsum.hpp"
#include "sinefactor/rootfind.hpp"
#include "sinefactor/sineform.hpp"

namespace sinefactor {

// Expands the sine product into its exponential-sum form. Every alpha_j must
// carry its exact alpha/pi vector, and a nonzero shift a needs a/(2*pi) as a
// vector too, otherwise BasisMismatch.
ExpSum build_sine_product(const SineProductForm& form);

using Matrix = std::vector<std::vector<Complex>>;

// Seeded complex Gaussian matrix orthonormalized by modified Gram-Schmidt;
// deterministic per seed, U*U = I to 1e-12.
Matrix random_unitary(int n, uint64_t seed);

struct SecularSpec {
  int n = 2;
  std::vector<std::string> lengths;  // positive decimals, pairwise distinct
  Matrix unitary;
  uint64_t seed = 0;
};

SecularSpec make_secular_spec(int n, std::vector<std::string> lengths, uint64_t seed);

struct SecularOptions {
  double window_lo = -20.0;
  double window_hi = 20.0;
  double eta = 1.0;
  bool certify = true;
};

// det(I - e^{ixL} U) expanded over principal minors into an exponential sum
// with frequencies sum_{j in T} l_j / (2*pi). Certified real-rooted on the
// probe window before being returned; throws NotRealRooted otherwise.
ExpSum secular_expsum(const SecularSpec& spec, const SecularOptions& opts = {});

Complex det_complex(Matrix m);  // small dense determinant, partial pivoting

}  // namespace sinefactor
