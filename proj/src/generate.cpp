#include "sinefactor/generate.hpp"

#include <cmath>
#include <random>

#include "sinefactor/errors.hpp"

namespace sinefactor {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

// splitmix64 + Box-Muller: identical streams on every platform and stdlib
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next_u64() {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }
  double gauss() {
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }
};
}  // namespace

ExpSum build_sine_product(const SineProductForm& form) {
  if (!form.basis) throw InvalidInput("sine product form has no basis");
  const size_t dim = form.basis->size();

  FreqVector shift(dim);
  if (form.a != 0.0) {
    if (!form.a_over_2pi)
      throw BasisMismatch("shift a = " + std::to_string(form.a) +
                          " has no a/(2*pi) vector over the declared basis");
    shift = *form.a_over_2pi;
    double check = 2.0 * kPi * form.basis->value_double(shift);
    if (std::abs(check - form.a) > 1e-9 * std::max(1.0, std::abs(form.a)))
      throw BasisMismatch("a/(2*pi) vector evaluates to " + std::to_string(check / (2.0 * kPi)) +
                          ", inconsistent with a = " + std::to_string(form.a));
  }

  ExpSum acc = ExpSum::make(form.basis, {{shift, form.C}});
  const Complex inv_2i = Complex(0.0, -0.5);  // 1/(2i)
  for (const auto& f : form.factors) {
    if (f.alpha <= 0.0) throw BadFactor("sine factor needs alpha > 0");
    double check = kPi * form.basis->value_double(f.alpha_over_pi);
    if (std::abs(check - f.alpha) > 1e-9 * std::max(1.0, f.alpha))
      throw BasisMismatch("alpha/pi vector evaluates to " + std::to_string(check) +
                          ", inconsistent with alpha = " + std::to_string(f.alpha));
    FreqVector half = f.alpha_over_pi.scaled(Rational(1, 2));  // alpha/(2*pi)
    ExpSum sine = ExpSum::make(form.basis, {{half, std::exp(Complex(0.0, f.beta)) * inv_2i},
                                            {-half, -std::exp(Complex(0.0, -f.beta)) * inv_2i}});
    for (int k = 0; k < f.multiplicity; ++k) acc = acc.multiply(sine);
  }
  if (acc.empty()) throw EmptySum("sine product expanded to the zero sum");
  return acc;
}

Matrix random_unitary(int n, uint64_t seed) {
  if (n < 1) throw InvalidInput("random_unitary needs n >= 1");
  Rng rng(seed ^ 0x5bf0a8dcul);
  Matrix a(n, std::vector<Complex>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = Complex(rng.gauss(), rng.gauss());

  // modified Gram-Schmidt on columns
  for (int j = 0; j < n; ++j) {
    for (int prev = 0; prev < j; ++prev) {
      Complex proj(0.0, 0.0);
      for (int i = 0; i < n; ++i) proj += std::conj(a[i][prev]) * a[i][j];
      for (int i = 0; i < n; ++i) a[i][j] -= proj * a[i][prev];
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += std::norm(a[i][j]);
    norm = std::sqrt(norm);
    if (norm < 1e-12) throw InvalidInput("degenerate random matrix; try another seed");
    for (int i = 0; i < n; ++i) a[i][j] /= norm;
  }
  return a;
}

SecularSpec make_secular_spec(int n, std::vector<std::string> lengths, uint64_t seed) {
  if (n < 1 || n > 6) throw InvalidInput("secular dimension must be in 1..6");
  if (static_cast<int>(lengths.size()) != n)
    throw InvalidInput("expected " + std::to_string(n) + " edge lengths");
  SecularSpec spec;
  spec.n = n;
  spec.lengths = std::move(lengths);
  spec.seed = seed;
  spec.unitary = random_unitary(n, seed);
  return spec;
}

Complex det_complex(Matrix m) {
  const size_t n = m.size();
  Complex det(1.0, 0.0);
  for (size_t c = 0; c < n; ++c) {
    size_t pivot = c;
    for (size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[pivot][c])) pivot = r;
    if (std::abs(m[pivot][c]) < 1e-300) return {0.0, 0.0};
    if (pivot != c) {
      std::swap(m[pivot], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      Complex f = m[r][c] / m[c][c];
      for (size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

ExpSum secular_expsum(const SecularSpec& spec, const SecularOptions& opts) {
  const int n = spec.n;
  if (n < 1 || n > 6) throw InvalidInput("secular dimension must be in 1..6");
  if (static_cast<int>(spec.lengths.size()) != n || static_cast<int>(spec.unitary.size()) != n)
    throw InvalidInput("secular spec dimensions are inconsistent");

  // basis entries l_j / (2*pi), so subset-sum frequencies are 0/1 vectors
  const mpfr_prec_t prec = Real::kDefaultPrec;
  Real two_pi = Real::pi(prec) * Real::from_int(2, prec);
  std::vector<std::pair<std::string, std::string>> entries;
  for (int j = 0; j < n; ++j) {
    Real l = Real::from_string(spec.lengths[j], prec);
    if (l.sign() <= 0) throw InvalidInput("edge lengths must be positive");
    entries.emplace_back("l" + std::to_string(j + 1) + "_over_2pi", (l / two_pi).to_string(110));
  }
  BasisPtr basis = make_basis(std::move(entries));

  // det(I - e^{ixL}U) = sum_T (-1)^{|T|} det(U[T,T]) e^{ix sum_{j in T} l_j}
  std::vector<std::pair<FreqVector, Complex>> terms;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> sel;
    for (int j = 0; j < n; ++j)
      if (mask & (1 << j)) sel.push_back(j);
    Matrix minor(sel.size(), std::vector<Complex>(sel.size()));
    for (size_t r = 0; r < sel.size(); ++r)
      for (size_t c = 0; c < sel.size(); ++c) minor[r][c] = spec.unitary[sel[r]][sel[c]];
    Complex coeff = (sel.size() % 2 ? -1.0 : 1.0) * (sel.empty() ? Complex(1.0, 0.0)
                                                                 : det_complex(std::move(minor)));
    FreqVector freq(basis->size());
    for (int j : sel) freq.coeffs[j] = Rational(1);
    terms.emplace_back(std::move(freq), coeff);
  }
  ExpSum Q = ExpSum::make(basis, terms);

  if (opts.certify) {
    CertifyReport rep = certify_real_rooted(Q, opts.window_lo, opts.window_hi, opts.eta);
    if (!rep.certified)
      throw NotRealRooted("secular function failed real-rootedness certification: contour count " +
                          std::to_string(rep.rect_count) + " vs located " +
                          std::to_string(rep.real_count));
  }
  return Q;
}

}  // namespace sinefactor
