#include "sinefactor/hexpansion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "sinefactor/errors.hpp"

namespace sinefactor {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.14159265358979323846264338327950288;

struct QueueItem {
  FreqVector vec;
  Real value;
  double value_d;
  size_t last_gen;
};

// Exact ordering with a cheap double pre-filter; emits the near-collision
// diagnostic when two distinct vectors agree to 1e-40.
struct ItemCmp {
  const Real* near_tol;
  bool operator()(const QueueItem& a, const QueueItem& b) const {
    double gap = std::abs(a.value_d - b.value_d);
    if (gap > 1e-9 * std::max(1.0, std::abs(a.value_d))) return a.value_d > b.value_d;
    int c = a.value.cmp(b.value);
    if (c == 0) return false;
    if (a.vec != b.vec && (a.value - b.value).abs() < *near_tol) {
      emit_diagnostic("distinct frequency vectors " + a.vec.to_string() + " and " +
                      b.vec.to_string() +
                      " have values closer than 1e-40; declared basis may be rationally dependent");
    }
    return c > 0;  // min-heap
  }
};
}  // namespace

std::vector<SemigroupElement> difference_semigroup(const std::vector<FreqVector>& spectrum,
                                                   Anchor anchor, double cutoff,
                                                   const FrequencyBasis& basis) {
  if (cutoff <= 0.0) throw BadCutoff("semigroup cutoff must be positive");
  if (spectrum.empty()) throw EmptySum("difference semigroup of an empty spectrum");

  // pick the anchor by exact value
  FreqVector anchor_vec = spectrum.front();
  for (const auto& v : spectrum) {
    int c = basis.compare_values(v, anchor_vec);
    if ((anchor == Anchor::Min && c < 0) || (anchor == Anchor::Max && c > 0)) anchor_vec = v;
  }

  struct Gen {
    FreqVector vec;
    Real value;
    double value_d;
  };
  std::vector<Gen> gens;
  const Real cutoff_r = Real::from_double(cutoff, basis.precision());
  for (const auto& v : spectrum) {
    if (v == anchor_vec) continue;
    FreqVector g = (anchor == Anchor::Min) ? v - anchor_vec : anchor_vec - v;
    Real gv = basis.value_of(g);
    if (gv.sign() <= 0) continue;  // defensive; distinct spectrum makes these positive
    if (gv > cutoff_r) continue;
    double gd = gv.to_double();
    gens.push_back(Gen{std::move(g), std::move(gv), gd});
  }
  std::sort(gens.begin(), gens.end(), [](const Gen& a, const Gen& b) { return a.value_d < b.value_d; });

  const Real near_tol = Real::from_string("1e-40", basis.precision());
  ItemCmp cmp{&near_tol};
  std::priority_queue<QueueItem, std::vector<QueueItem>, ItemCmp> heap(cmp);
  std::unordered_set<FreqVector, FreqVectorHash> seen;

  for (size_t i = 0; i < gens.size(); ++i) {
    if (seen.insert(gens[i].vec).second)
      heap.push(QueueItem{gens[i].vec, gens[i].value, gens[i].value_d, i});
  }

  std::vector<SemigroupElement> out;
  while (!heap.empty()) {
    QueueItem top = heap.top();
    heap.pop();
    // extend by generators at or past the last index: every multiset is
    // produced exactly once, collisions across multisets removed by `seen`
    for (size_t i = top.last_gen; i < gens.size(); ++i) {
      double cand_d = top.value_d + gens[i].value_d;
      if (cand_d > cutoff + 1e-6) break;  // gens sorted; later ones only larger
      Real cand = top.value + gens[i].value;
      if (cand > cutoff_r) continue;
      double cand_exact_d = cand.to_double();
      FreqVector cand_vec = top.vec + gens[i].vec;
      if (seen.insert(cand_vec).second)
        heap.push(QueueItem{std::move(cand_vec), std::move(cand), cand_exact_d, i});
    }
    out.push_back(SemigroupElement{std::move(top.vec), std::move(top.value), top.value_d});
  }
  return out;
}

HExpansion::HExpansion(BasisPtr basis, HalfPlane hp, Complex h0, std::vector<HAtom> atoms,
                       double cutoff)
    : basis_(std::move(basis)), halfplane_(hp), h0_(h0), atoms_(std::move(atoms)), cutoff_(cutoff) {
  if (cutoff_ <= 0.0) throw BadCutoff("expansion cutoff must be positive");
  for (size_t i = 0; i < atoms_.size(); ++i) {
    const double g = atoms_[i].gamma_value;
    if (hp == HalfPlane::Upper && g <= 0.0)
      throw InvalidInput("upper-half-plane atom with non-positive frequency");
    if (hp == HalfPlane::Lower && g >= 0.0)
      throw InvalidInput("lower-half-plane atom with non-negative frequency");
    if (i > 0 && atoms_[i - 1].gamma_value >= g)
      throw InvalidInput("expansion atoms must be strictly increasing in frequency");
    if (atoms_[i].h == Complex(0.0, 0.0)) throw InvalidInput("zero-mass atom stored in expansion");
  }
}

double HExpansion::total_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += std::abs(a.h);
  return m;
}

const HAtom* HExpansion::find(const FreqVector& gamma) const {
  for (const auto& a : atoms_)
    if (a.gamma == gamma) return &a;
  return nullptr;
}

namespace {

// complex pair of MPFR reals for the opt-in high-precision recursion
struct CReal {
  Real re, im;
  static CReal from(Complex z, mpfr_prec_t prec) {
    return CReal{Real::from_double(z.real(), prec), Real::from_double(z.imag(), prec)};
  }
  Complex to_complex() const { return Complex(re.to_double(), im.to_double()); }
  CReal operator+(const CReal& o) const { return {re + o.re, im + o.im}; }
  CReal operator-(const CReal& o) const { return {re - o.re, im - o.im}; }
  CReal operator*(const CReal& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  CReal operator/(const CReal& o) const {
    Real d = o.re * o.re + o.im * o.im;
    return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
  }
  Real abs2() const { return re * re + im * im; }
};

template <typename C>
struct RecursionTraits;

// default: long double internals keep the triangular error accumulation well
// below the 1e-8 oracle tolerances even over ~10^5-element semigroups
struct LongDoubleOps {
  using C = std::complex<long double>;
  static C from(Complex z, mpfr_prec_t) { return C(z.real(), z.imag()); }
  static Complex to_complex(const C& z) {
    return Complex(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  static double abs_val(const C& z) { return static_cast<double>(std::abs(z)); }
  // 2*pi*i*(anchor + sigma*g)
  static C two_pi_i_freq(double, const Real& anchor_r, int sigma, const SemigroupElement* g,
                         mpfr_prec_t) {
    constexpr long double two_pi = 6.283185307179586476925286766559005768L;
    long double v = anchor_r.to_long_double();
    if (g) v += sigma * g->value.to_long_double();
    return C(0.0L, two_pi * v);
  }
};

struct MpfrOps {
  using C = CReal;
  static C from(Complex z, mpfr_prec_t prec) { return CReal::from(z, prec); }
  static Complex to_complex(const C& z) { return z.to_complex(); }
  static double abs_val(const C& z) { return std::sqrt(z.abs2().to_double()); }
  static C two_pi_i_freq(double, const Real& anchor_r, int sigma, const SemigroupElement* g,
                         mpfr_prec_t prec) {
    Real v = anchor_r;
    if (g) v = (sigma > 0) ? v + g->value : v - g->value;
    Real two_pi = Real::pi(prec) * Real::from_int(2, prec);
    return CReal{Real(prec), two_pi * v};
  }
};

template <typename Ops>
std::vector<HAtom> run_recursion(const ExpSum& Q, HalfPlane hp, const FreqVector& anchor_vec,
                                 double anchor_value,
                                 const std::vector<SemigroupElement>& semigroup,
                                 const HOptions& opts, mpfr_prec_t prec) {
  using C = typename Ops::C;
  const int sigma = (hp == HalfPlane::Upper) ? +1 : -1;
  const Real anchor_real = Q.basis()->value_of(anchor_vec);

  std::vector<std::pair<FreqVector, C>> spectrum;  // excluding the anchor
  C q_anchor = Ops::from(Complex(0, 0), prec);
  for (const auto& [vec, q] : Q.terms()) {
    if (vec == anchor_vec)
      q_anchor = Ops::from(q, prec);
    else
      spectrum.emplace_back(vec, Ops::from(q, prec));
  }

  // h at signed gamma vectors computed so far; the zero vector holds h0
  std::unordered_map<FreqVector, C, FreqVectorHash> computed;
  computed.emplace(FreqVector(Q.basis()->size()),
                   Ops::two_pi_i_freq(anchor_value, anchor_real, sigma, nullptr, prec));

  std::vector<HAtom> atoms;
  atoms.reserve(semigroup.size());
  for (const auto& g : semigroup) {
    FreqVector gamma_vec = (sigma > 0) ? g.vec : -g.vec;
    FreqVector s_vec = anchor_vec + gamma_vec;

    C acc = Ops::two_pi_i_freq(anchor_value, anchor_real, sigma, &g, prec) *
            Ops::from(Q.coeff(s_vec), prec);
    for (const auto& [omega_vec, q_omega] : spectrum) {
      auto it = computed.find(s_vec - omega_vec);
      if (it == computed.end()) continue;  // not an earlier atom: h vanishes there
      acc = acc - it->second * q_omega;
    }
    C h = acc / q_anchor;
    double mag = Ops::abs_val(h);
    if (mag > opts.overflow_abort) throw OverflowAbort(sigma * g.value_d, mag);
    if (mag >= opts.drop_tol)
      atoms.push_back(HAtom{gamma_vec, sigma * g.value_d, Ops::to_complex(h)});
    computed.emplace(std::move(gamma_vec), std::move(h));
  }
  if (sigma < 0) std::reverse(atoms.begin(), atoms.end());
  return atoms;
}

}  // namespace

HExpansion h_expansion(const ExpSum& Q, HalfPlane hp, double cutoff, const HOptions& opts) {
  if (Q.empty()) throw EmptySum("h_expansion of the zero sum");
  if (cutoff <= 0.0) throw BadCutoff("h_expansion cutoff must be positive");

  auto ext = Q.spectrum_extremes();
  const FreqVector& anchor_vec = (hp == HalfPlane::Upper) ? ext.min_vec : ext.max_vec;
  const double anchor_value = (hp == HalfPlane::Upper) ? ext.min_value : ext.max_value;

  std::vector<FreqVector> spectrum;
  spectrum.reserve(Q.size());
  for (const auto& [vec, q] : Q.terms()) spectrum.push_back(vec);
  auto semigroup = difference_semigroup(
      spectrum, hp == HalfPlane::Upper ? Anchor::Min : Anchor::Max, cutoff, *Q.basis());

  std::vector<HAtom> atoms;
  if (opts.precision_bits > 64) {
    atoms = run_recursion<MpfrOps>(Q, hp, anchor_vec, anchor_value, semigroup, opts,
                                   opts.precision_bits);
  } else {
    atoms = run_recursion<LongDoubleOps>(Q, hp, anchor_vec, anchor_value, semigroup, opts, 0);
  }
  return HExpansion(Q.basis(), hp, Complex(0.0, kTwoPi * anchor_value), std::move(atoms), cutoff);
}

HExpansion sine_product_h_closed_form(const SineProductForm& form, HalfPlane hp, double cutoff,
                                      const HOptions& opts) {
  if (cutoff <= 0.0) throw BadCutoff("closed-form cutoff must be positive");
  const auto& basis = *form.basis;
  const int sigma = (hp == HalfPlane::Upper) ? +1 : -1;

  std::map<FreqVector, std::pair<double, Complex>> merged;  // gamma -> (value, h)
  const Real cutoff_r = Real::from_double(cutoff, basis.precision());
  for (const auto& f : form.factors) {
    if (f.alpha <= 0.0) throw BadFactor("sine factor needs alpha > 0");
    Real step = basis.value_of(f.alpha_over_pi);
    if (step.sign() <= 0) throw BadFactor("sine factor needs alpha > 0");
    Real value = step;
    for (long long n = 1; value <= cutoff_r; ++n, value = value + step) {
      // cot series: h = -2i k alpha e^{2i beta n} at gamma = n alpha / pi
      // (upper); conjugate-mirrored for the lower half-plane
      Complex h = Complex(0.0, -2.0 * sigma * f.multiplicity * f.alpha) *
                  std::exp(Complex(0.0, 2.0 * sigma * f.beta * n));
      FreqVector gamma = (sigma > 0) ? f.alpha_over_pi.scaled(Rational(n))
                                     : -f.alpha_over_pi.scaled(Rational(n));
      auto [it, inserted] = merged.emplace(gamma, std::make_pair(sigma * value.to_double(), h));
      if (!inserted) it->second.second += h;
    }
  }

  std::vector<HAtom> atoms;
  for (auto& [vec, pr] : merged)
    if (std::abs(pr.second) >= opts.drop_tol) atoms.push_back(HAtom{vec, pr.first, pr.second});
  std::sort(atoms.begin(), atoms.end(),
            [](const HAtom& a, const HAtom& b) { return a.gamma_value < b.gamma_value; });

  Complex h0(0.0, form.a - sigma * form.alpha_sum());
  return HExpansion(form.basis, hp, h0, std::move(atoms), cutoff);
}

GrowthReport growth_profile(const HExpansion& upper, const HExpansion& lower,
                            const std::vector<double>& radii) {
  if (radii.empty()) throw InvalidInput("growth profile needs at least one radius");
  if (radii.front() <= 0.0) throw InvalidInput("radii must be positive");
  for (size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) throw InvalidInput("radii must be strictly increasing");
  double max_r = radii.back();
  if (max_r > upper.cutoff() + 1e-12 || max_r > lower.cutoff() + 1e-12)
    throw CutoffExceeded("growth radius " + std::to_string(max_r) +
                         " exceeds the expansion cutoff");

  // merge |gamma| -> |h| from both half-planes, then sweep
  std::vector<std::pair<double, double>> mass;
  mass.reserve(upper.atoms().size() + lower.atoms().size());
  for (const auto& a : upper.atoms()) mass.emplace_back(std::abs(a.gamma_value), std::abs(a.h));
  for (const auto& a : lower.atoms()) mass.emplace_back(std::abs(a.gamma_value), std::abs(a.h));
  std::sort(mass.begin(), mass.end());

  GrowthReport rep;
  rep.radii = radii;
  rep.R_values.reserve(radii.size());
  rep.ratio_profile.reserve(radii.size());
  size_t idx = 0;
  double acc = 0.0;
  for (double r : radii) {
    while (idx < mass.size() && mass[idx].first < r) acc += mass[idx++].second;
    rep.R_values.push_back(acc);
    rep.ratio_profile.push_back(acc / r);
  }
  rep.decades = std::log10(radii.back() / radii.front());

  // least-squares slope of log R vs log r over the top decade
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < radii.back() / 10.0) continue;
    if (rep.R_values[i] <= 0.0) continue;
    double lx = std::log(radii[i]), ly = std::log(rep.R_values[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  double denom = n * sxx - sx * sx;
  rep.slope_estimate = (n >= 2 && std::abs(denom) > 1e-30)
                           ? (n * sxy - sx * sy) / denom
                           : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

MeyerReport meyer_verdict(const GrowthReport& report, double slope_tolerance, double span_factor) {
  MeyerReport out;
  out.data = report;
  out.slope_estimate = report.slope_estimate;

  double top_min = std::numeric_limits<double>::infinity(), top_max = 0.0;
  for (size_t i = 0; i < report.radii.size(); ++i) {
    if (report.radii[i] < report.radii.back() / 10.0) continue;
    top_min = std::min(top_min, report.ratio_profile[i]);
    top_max = std::max(top_max, report.ratio_profile[i]);
  }
  out.top_decade_ratio_spread = (top_min > 0.0) ? top_max / top_min
                                                : std::numeric_limits<double>::infinity();

  double first_pos = 0.0, last_pos = 0.0;
  for (double v : report.ratio_profile) {
    if (v > 0.0) {
      if (first_pos == 0.0) first_pos = v;
      last_pos = v;
    }
  }
  out.full_range_ratio_increase = (first_pos > 0.0) ? last_pos / first_pos : 0.0;

  bool all_zero = report.R_values.empty() || report.R_values.back() == 0.0;
  if (report.decades < 2.0 - 1e-9) {
    out.verdict = Verdict::Inconclusive;
  } else if (all_zero) {
    out.verdict = Verdict::Linear;  // R == 0 is trivially O(r)
  } else if (!std::isnan(report.slope_estimate) &&
             report.slope_estimate <= 1.0 + slope_tolerance &&
             out.top_decade_ratio_spread <= 2.0) {
    out.verdict = Verdict::Linear;
  } else if (!std::isnan(report.slope_estimate) &&
             report.slope_estimate >= 1.0 + slope_tolerance &&
             out.full_range_ratio_increase >= span_factor) {
    out.verdict = Verdict::Superlinear;
  } else {
    out.verdict = Verdict::Inconclusive;
  }
  return out;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Linear:
      return "Linear";
    case Verdict::Superlinear:
      return "Superlinear";
    default:
      return "Inconclusive";
  }
}

std::vector<double> default_radii(double cutoff, int count) {
  std::vector<double> r;
  r.reserve(count);
  double lo = cutoff / 300.0;
  for (int i = 0; i < count; ++i)
    r.push_back(lo * std::pow(cutoff / lo, static_cast<double>(i) / (count - 1)));
  return r;
}

}  // namespace sinefactor
