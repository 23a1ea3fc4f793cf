#pragma once

#include "sinefactor/hexpansion.hpp"
#include "sinefactor/rootfind.hpp"
#include "sinefactor/sineform.hpp"

namespace sinefactor {

struct PeelResult {
  std::vector<SineProductForm::Factor> factors;
  HExpansion residual;
};

// Greedy peeling of the upper expansion: the smallest remaining atom pins
// down (alpha, beta, k) of one sine factor, whose full cotangent series is
// then subtracted exactly (by frequency vector). Throws NotASineProduct when
// a step fails or mass remains after max_factors rounds.
PeelResult peel_sine_factors(const HExpansion& upper, double tol = 1e-6, int max_factors = 64);

// a from h0+ = i(a - sum k alpha); C from one evaluation at z0 = i.
// Throws InconsistentPrefactor if the recovered exponent is not real.
std::pair<Complex, double> recover_scale(const ExpSum& Q, const HExpansion& upper,
                                         const std::vector<SineProductForm::Factor>& factors,
                                         double im_tol = 1e-8);

struct VerifyReport {
  double max_abs_residual;  // max |Q(z)/form(z) - 1| over the sample set
  int samples_used;
  int samples_requested;
};

// Samples Q/form on the lines Im z in {-1, 0, +1}; real-axis points within
// 0.1 of a form zero are skipped.
VerifyReport verify_form(const ExpSum& Q, const SineProductForm& form, int samples = 64);

struct Progression {
  double period;
  double offset;  // reduced modulo period
  int multiplicity;
};

struct ProgressionSet {
  std::vector<Progression> progressions;
  std::vector<double> exceptional_plus;   // zeros not on any progression
  std::vector<double> exceptional_minus;  // progression slots with no zero
};

struct DecomposeOptions {
  bool allow_exceptional = false;  // default: reject leftovers on certified input
  int neighbor_horizon = 64;       // pairwise gaps scanned up to this index distance
  int max_progressions = 64;
  int min_members = 3;
};

ProgressionSet decompose_zero_set(const ZeroSet& zeros, double gap_tol = 1e-6,
                                  const DecomposeOptions& opts = {});

struct ConsistencyReport {
  struct Match {
    size_t factor_index;
    size_t progression_index;
    double period_error;
  };
  std::vector<Match> matched;
  std::vector<size_t> unmatched_factors;
  std::vector<size_t> unmatched_progressions;
  bool fully_matched() const { return unmatched_factors.empty() && unmatched_progressions.empty(); }
};

// Pairs factors with progressions through period = pi/alpha and equal
// multiplicity. Report-only; never throws.
ConsistencyReport consistency_check(const SineProductForm& form, const ProgressionSet& progs,
                                    double period_tol = 1e-6);

// Convenience pipeline: upper expansion -> peel -> recover scale -> canonical
// form. Throws NotASineProduct / InconsistentPrefactor on failure.
SineProductForm factorize(const ExpSum& Q, double cutoff, double tol = 1e-6);

}  // namespace sinefactor
