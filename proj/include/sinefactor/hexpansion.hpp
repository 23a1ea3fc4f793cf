#pragma once

#include <vector>

#include "sinefactor/expsum.hpp"
#include "sinefactor/sineform.hpp"

namespace sinefactor {

enum class HalfPlane { Upper, Lower };
enum class Anchor { Min, Max };

struct SemigroupElement {
  FreqVector vec;
  Real value;
  double value_d;
};

// All N-combinations of the difference generators {w - w_anchor} with value in
// (0, cutoff], in increasing value, deduplicated by exact vector.
std::vector<SemigroupElement> difference_semigroup(const std::vector<FreqVector>& spectrum,
                                                   Anchor anchor, double cutoff,
                                                   const FrequencyBasis& basis);

struct HAtom {
  FreqVector gamma;
  double gamma_value;
  Complex h;
};

// One half-plane Dirichlet expansion of Q'/Q: constant h0 plus atoms at
// frequencies gamma, ordered by increasing gamma value. Upper atoms live in
// (0, cutoff], lower atoms in [-cutoff, 0).
class HExpansion {
 public:
  HExpansion(BasisPtr basis, HalfPlane hp, Complex h0, std::vector<HAtom> atoms, double cutoff);

  const BasisPtr& basis() const { return basis_; }
  HalfPlane halfplane() const { return halfplane_; }
  Complex h0() const { return h0_; }
  const std::vector<HAtom>& atoms() const { return atoms_; }
  double cutoff() const { return cutoff_; }

  double total_mass() const;  // sum of |h| over atoms
  const HAtom* find(const FreqVector& gamma) const;

 private:
  BasisPtr basis_;
  HalfPlane halfplane_;
  Complex h0_;
  std::vector<HAtom> atoms_;
  double cutoff_;
};

struct HOptions {
  double drop_tol = 1e-30;        // atoms below this magnitude are not reported
  double overflow_abort = 1e300;  // any |h| beyond this aborts the recursion
  mpfr_prec_t precision_bits = 0;  // <=64: native (long double) path; larger: MPFR
};

// Triangular recursion for the half-plane expansion of Q'/Q, obtained by
// matching coefficients in Q' = (Q'/Q) * Q along the difference semigroup.
HExpansion h_expansion(const ExpSum& Q, HalfPlane hp, double cutoff, const HOptions& opts = {});

// Closed-form expansion of a sine product: each factor sin^k(alpha z + beta)
// contributes atoms -2ik*alpha*e^{2i*beta*n} at gamma = n*alpha/pi (upper
// half-plane; mirrored for the lower one), plus h0 = i(a -+ sum k*alpha).
HExpansion sine_product_h_closed_form(const SineProductForm& form, HalfPlane hp, double cutoff,
                                      const HOptions& opts = {});

struct GrowthReport {
  std::vector<double> radii;
  std::vector<double> R_values;
  std::vector<double> ratio_profile;  // R(r)/r
  double slope_estimate;              // NaN when undefined (no positive R in top decade)
  double decades;                     // log10(r_max / r_min)
};

GrowthReport growth_profile(const HExpansion& upper, const HExpansion& lower,
                            const std::vector<double>& radii);

enum class Verdict { Linear, Superlinear, Inconclusive };

struct MeyerReport {
  Verdict verdict;
  double slope_estimate;
  double top_decade_ratio_spread;   // max/min of R/r over the top decade
  double full_range_ratio_increase;  // last positive R/r over first positive R/r
  GrowthReport data;
};

MeyerReport meyer_verdict(const GrowthReport& report, double slope_tolerance = 0.15,
                          double span_factor = 5.0);

const char* verdict_name(Verdict v);

// Log-spaced radii covering [cutoff/300, cutoff], handy default for reports.
std::vector<double> default_radii(double cutoff, int count = 80);

}  // namespace sinefactor
