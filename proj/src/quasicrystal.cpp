#include "sinefactor/quasicrystal.hpp"

#include <algorithm>
#include <cmath>

#include "sinefactor/errors.hpp"

namespace sinefactor {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

AtomicMeasure::AtomicMeasure(BasisPtr basis, std::vector<MassAtom> atoms, double cutoff)
    : basis_(std::move(basis)), atoms_(std::move(atoms)), cutoff_(cutoff) {
  for (size_t i = 1; i < atoms_.size(); ++i)
    if (atoms_[i - 1].gamma_value >= atoms_[i].gamma_value)
      throw InvalidInput("measure atoms must be strictly increasing in frequency");
}

Complex AtomicMeasure::mass_at_zero() const {
  for (const auto& a : atoms_)
    if (a.gamma.is_zero()) return a.mass;
  return {0.0, 0.0};
}

AtomicMeasure fourier_atoms(const HExpansion& upper, const HExpansion& lower) {
  if (upper.halfplane() != HalfPlane::Upper || lower.halfplane() != HalfPlane::Lower)
    throw InvalidInput("fourier_atoms needs one upper and one lower expansion");
  if (upper.cutoff() != lower.cutoff())
    throw CutoffMismatch("expansions have cutoffs " + std::to_string(upper.cutoff()) + " and " +
                         std::to_string(lower.cutoff()));
  if (!upper.basis()->same_as(*lower.basis()))
    throw BasisMismatch("expansions live over different bases");

  const Complex i_over_2pi(0.0, 1.0 / kTwoPi);
  std::vector<MassAtom> atoms;
  atoms.reserve(upper.atoms().size() + lower.atoms().size() + 1);
  for (const auto& a : lower.atoms())
    atoms.push_back(MassAtom{a.gamma, a.gamma_value, -i_over_2pi * a.h});
  Complex at_zero = i_over_2pi * (upper.h0() - lower.h0());
  if (at_zero != Complex(0.0, 0.0))
    atoms.push_back(MassAtom{FreqVector(upper.basis()->size()), 0.0, at_zero});
  for (const auto& a : upper.atoms())
    atoms.push_back(MassAtom{a.gamma, a.gamma_value, i_over_2pi * a.h});
  return AtomicMeasure(upper.basis(), std::move(atoms), upper.cutoff());
}

const char* weight_name(Weight w) { return w == Weight::Fejer ? "fejer" : "gaussian"; }

namespace {
double weight_value(Weight w, double t) {
  if (std::abs(t) > 1.0) return 0.0;
  if (w == Weight::Fejer) return 1.0 - std::abs(t);
  return std::exp(-8.0 * t * t);
}

double weight_integral(Weight w) {
  if (w == Weight::Fejer) return 1.0;
  return std::sqrt(M_PI / 8.0) * std::erf(std::sqrt(8.0));  // int_{-1}^{1} e^{-8 t^2} dt
}
}  // namespace

Complex empirical_atom(const ZeroSet& zeros, double gamma, Weight weight) {
  if (!zeros.certified())
    throw RequiresCertification("empirical atoms need a certified zero set");
  double L = std::min(-zeros.x_lo(), zeros.x_hi());
  if (L <= 0.0) throw InvalidInput("empirical_atom needs a window straddling the origin");
  double re = 0.0, im = 0.0;
  for (const auto& z : zeros.zeros()) {
    if (std::abs(z.location) > L) continue;
    double w = z.multiplicity * weight_value(weight, z.location / L);
    double phase = -kTwoPi * gamma * z.location;
    re += w * std::cos(phase);
    im += w * std::sin(phase);
  }
  double norm = L * weight_integral(weight);
  return Complex(re / norm, im / norm);
}

double DiffractionReport::max_abs_error() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.abs_error);
  return m;
}

DiffractionReport compare_diffraction(const AtomicMeasure& measure, const ZeroSet& zeros,
                                      int top_k, Weight weight) {
  std::vector<const MassAtom*> ranked;
  for (const auto& a : measure.atoms())
    if (!a.gamma.is_zero()) ranked.push_back(&a);
  std::stable_sort(ranked.begin(), ranked.end(), [](const MassAtom* a, const MassAtom* b) {
    return std::abs(a->mass) > std::abs(b->mass);
  });
  if (static_cast<int>(ranked.size()) > top_k) ranked.resize(top_k);
  std::sort(ranked.begin(), ranked.end(),
            [](const MassAtom* a, const MassAtom* b) { return a->gamma_value < b->gamma_value; });

  DiffractionReport rep;
  rep.window_L = std::min(-zeros.x_lo(), zeros.x_hi());
  rep.weight = weight_name(weight);
  if (measure.empty()) return rep;

  auto add_entry = [&](double gamma, Complex formula) {
    Complex emp = empirical_atom(zeros, gamma, weight);
    rep.entries.push_back(DiffractionEntry{gamma, formula, emp, std::abs(formula - emp)});
  };
  bool zero_added = false;
  for (const MassAtom* a : ranked) {
    if (!zero_added && a->gamma_value > 0.0) {
      add_entry(0.0, measure.mass_at_zero());
      zero_added = true;
    }
    add_entry(a->gamma_value, a->mass);
  }
  if (!zero_added) add_entry(0.0, measure.mass_at_zero());
  return rep;
}

DiffractionReport compare_diffraction(const ExpSum& Q, double L, int top_k, double cutoff,
                                      double eta, Weight weight) {
  HExpansion upper = h_expansion(Q, HalfPlane::Upper, cutoff);
  HExpansion lower = h_expansion(Q, HalfPlane::Lower, cutoff);
  AtomicMeasure measure = fourier_atoms(upper, lower);
  if (measure.empty())
    return DiffractionReport{{}, L, weight_name(weight)};

  double lo = pick_contour_abscissa(Q, -L - 0.25, 0.2, eta);
  double hi = pick_contour_abscissa(Q, L + 0.25, 0.2, eta);
  ZeroSet zeros = locate_real_zeros(Q, lo, hi, eta);
  if (!zeros.certified())
    throw RequiresCertification("zero location on the diffraction window failed certification");
  // clip back so the empirical window is exactly [-L, L]
  ZeroSet clipped(-L, L, zeros.eta(), [&] {
    std::vector<Zero> in;
    for (const auto& z : zeros.zeros())
      if (std::abs(z.location) <= L) in.push_back(z);
    return in;
  }(), true);
  return compare_diffraction(measure, clipped, top_k, weight);
}

}  // namespace sinefactor
