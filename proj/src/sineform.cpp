#include "sinefactor/sineform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sinefactor/errors.hpp"

namespace sinefactor {

Complex SineProductForm::evaluate(Complex z) const {
  Complex r = C * std::exp(Complex(0.0, 1.0) * (a * z));
  for (const auto& f : factors) {
    Complex s = std::sin(f.alpha * z + f.beta);
    for (int k = 0; k < f.multiplicity; ++k) r *= s;
  }
  return r;
}

int SineProductForm::total_degree() const {
  int d = 0;
  for (const auto& f : factors) d += f.multiplicity;
  return d;
}

double SineProductForm::alpha_sum() const {
  double s = 0.0;
  for (const auto& f : factors) s += f.multiplicity * f.alpha;
  return s;
}

void SineProductForm::canonicalize() {
  const double pi = 3.14159265358979323846264338327950288;
  for (auto& f : factors) {
    double b = std::fmod(f.beta, pi);
    if (b < 0) b += pi;
    // each wrap by pi flips the sign of sin^k once per unit of multiplicity
    double wraps = std::round((f.beta - b) / pi);
    long long flips = static_cast<long long>(wraps) * f.multiplicity;
    if (flips % 2 != 0) C = -C;
    f.beta = b;
  }
  std::sort(factors.begin(), factors.end(), [](const Factor& x, const Factor& y) {
    if (x.alpha != y.alpha) return x.alpha < y.alpha;
    return x.beta < y.beta;
  });
  std::vector<Factor> merged;
  for (const auto& f : factors) {
    if (!merged.empty() && merged.back().alpha_over_pi == f.alpha_over_pi &&
        std::abs(merged.back().beta - f.beta) < 1e-12) {
      merged.back().multiplicity += f.multiplicity;
    } else {
      merged.push_back(f);
    }
  }
  factors = std::move(merged);
}

std::string SineProductForm::render() const {
  std::ostringstream os;
  os.precision(12);
  os << "(" << C.real() << (C.imag() < 0 ? " - " : " + ") << std::abs(C.imag()) << "i)";
  if (a != 0.0) os << " * e^{i*" << a << "*z}";
  for (const auto& f : factors) {
    os << " * sin";
    if (f.multiplicity > 1) os << "^" << f.multiplicity;
    os << "(" << f.alpha << "*z";
    if (f.beta != 0.0) os << " + " << f.beta;
    os << ")";
  }
  return os.str();
}

}  // namespace sinefactor
