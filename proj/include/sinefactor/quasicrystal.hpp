#pragma once

#include <string>

#include "sinefactor/hexpansion.hpp"
#include "sinefactor/rootfind.hpp"

namespace sinefactor {

struct MassAtom {
  FreqVector gamma;
  double gamma_value;
  Complex mass;
};

// Atomic Fourier transform of the zero-counting measure, assembled from the
// two half-plane expansions. Atoms ordered by increasing frequency.
class AtomicMeasure {
 public:
  AtomicMeasure(BasisPtr basis, std::vector<MassAtom> atoms, double cutoff);

  const BasisPtr& basis() const { return basis_; }
  const std::vector<MassAtom>& atoms() const { return atoms_; }
  double cutoff() const { return cutoff_; }
  Complex mass_at_zero() const;
  bool empty() const { return atoms_.empty(); }

 private:
  BasisPtr basis_;
  std::vector<MassAtom> atoms_;
  double cutoff_;
};

// mass i*h/(2pi) on the upper atoms, -i*h/(2pi) on the lower atoms, and
// i*(h0+ - h0-)/(2pi) at zero.
AtomicMeasure fourier_atoms(const HExpansion& upper, const HExpansion& lower);

enum class Weight { Fejer, Gaussian };
const char* weight_name(Weight w);

// Windowed empirical mass (1/(L*int w)) * sum a(l) w(l/L) e^{-2 pi i gamma l}
// over the certified zeros with |l| <= L.
Complex empirical_atom(const ZeroSet& zeros, double gamma, Weight weight = Weight::Fejer);

struct DiffractionEntry {
  double gamma;
  Complex formula_mass;
  Complex empirical_mass;
  double abs_error;
};

struct DiffractionReport {
  std::vector<DiffractionEntry> entries;
  double window_L;
  std::string weight;
  double max_abs_error() const;
};

// Tabulates formula vs empirical masses for the top_k atoms by |mass| plus the
// atom at zero, using an already-computed measure and certified zero set.
DiffractionReport compare_diffraction(const AtomicMeasure& measure, const ZeroSet& zeros,
                                      int top_k, Weight weight = Weight::Fejer);

// Full pipeline variant: expansions at `cutoff`, zeros certified on a window
// just beyond [-L, L].
DiffractionReport compare_diffraction(const ExpSum& Q, double L, int top_k, double cutoff,
                                      double eta = 1.0, Weight weight = Weight::Fejer);

}  // namespace sinefactor
