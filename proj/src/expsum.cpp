#include "sinefactor/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sinefactor/errors.hpp"

namespace sinefactor {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kLogDoubleMax = 709.0;

// Neumaier-compensated accumulator.
struct Kahan {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double get() const { return sum + comp; }
};
}  // namespace

double ScaledComplex::log_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(mantissa)) + log_scale;
}

Complex ScaledComplex::value() const {
  if (is_zero()) return {0.0, 0.0};
  double la = log_abs();
  if (la > kLogDoubleMax) throw OverflowSignal(la, std::arg(mantissa));
  return mantissa * std::exp(log_scale);
}

ExpSum ExpSum::make(BasisPtr basis, const std::vector<std::pair<FreqVector, Complex>>& terms) {
  ExpSum s = make_allow_empty(std::move(basis), terms);
  if (s.empty()) throw EmptySum("all terms cancelled or none were given");
  return s;
}

ExpSum ExpSum::make_allow_empty(BasisPtr basis,
                                const std::vector<std::pair<FreqVector, Complex>>& terms) {
  ExpSum s(std::move(basis));
  for (const auto& [vec, coeff] : terms) {
    if (vec.size() != s.basis_->size())
      throw BasisMismatch("term frequency vector length " + std::to_string(vec.size()) +
                          " does not match basis size " + std::to_string(s.basis_->size()));
    auto [it, inserted] = s.terms_.emplace(vec, coeff);
    if (!inserted) it->second += coeff;
  }
  for (auto it = s.terms_.begin(); it != s.terms_.end();)
    it = (it->second == Complex(0.0, 0.0)) ? s.terms_.erase(it) : std::next(it);
  s.finalize();
  return s;
}

void ExpSum::finalize() {
  eval_.clear();
  eval_.reserve(terms_.size());
  for (const auto& [vec, q] : terms_)
    eval_.push_back(EvalTerm{basis_->value_double(vec), q, std::log(std::abs(q))});
  std::sort(eval_.begin(), eval_.end(),
            [](const EvalTerm& a, const EvalTerm& b) { return a.omega < b.omega; });
}

Complex ExpSum::coeff(const FreqVector& v) const {
  auto it = terms_.find(v);
  return it == terms_.end() ? Complex(0.0, 0.0) : it->second;
}

ScaledComplex ExpSum::evaluate_scaled(Complex z) const {
  if (eval_.empty()) return {};
  const double x = z.real(), y = z.imag();
  // factor out the largest pure-exponential part so the compensated sum stays
  // in range for any |Im z|; coefficients enter as exact complex factors
  double peak = 0.0;
  for (const auto& t : eval_) peak = std::max(peak, -kTwoPi * t.omega * y);
  Kahan re, im;
  for (const auto& t : eval_) {
    double lm = -kTwoPi * t.omega * y - peak;
    double phase = kTwoPi * t.omega * x;
    Complex rot(std::cos(phase), std::sin(phase));
    Complex contrib;
    if (lm > -700.0) {
      contrib = t.q * (std::exp(lm) * rot);
    } else {
      // exp(lm) alone would underflow; fold |q| into the exponent first
      double lm2 = lm + t.log_abs_q;
      if (lm2 < -745.0) continue;
      contrib = (t.q / std::abs(t.q)) * (std::exp(lm2) * rot);
    }
    re.add(contrib.real());
    im.add(contrib.imag());
  }
  return ScaledComplex{Complex(re.get(), im.get()), peak};
}

Complex ExpSum::evaluate(Complex z) const { return evaluate_scaled(z).value(); }

double ExpSum::log_abs_sum(Complex z) const {
  if (eval_.empty()) return -std::numeric_limits<double>::infinity();
  const double y = z.imag();
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& t : eval_) peak = std::max(peak, t.log_abs_q - kTwoPi * t.omega * y);
  double s = 0.0;
  for (const auto& t : eval_) s += std::exp(t.log_abs_q - kTwoPi * t.omega * y - peak);
  return peak + std::log(s);
}

double max_union_coeff_diff(const ExpSum& a, const ExpSum& b) {
  double worst = 0.0;
  for (const auto& [vec, q] : a.terms()) worst = std::max(worst, std::abs(q - b.coeff(vec)));
  for (const auto& [vec, q] : b.terms()) worst = std::max(worst, std::abs(q - a.coeff(vec)));
  return worst;
}

ExpSum ExpSum::derivative() const {
  std::vector<std::pair<FreqVector, Complex>> out;
  out.reserve(terms_.size());
  for (const auto& [vec, q] : terms_) {
    double omega = basis_->value_double(vec);
    Complex factor(0.0, kTwoPi * omega);
    out.emplace_back(vec, factor * q);
  }
  return make_allow_empty(basis_, out);
}

ExpSum ExpSum::multiply(const ExpSum& other) const {
  if (!basis_->same_as(*other.basis_))
    throw BasisMismatch("cannot multiply exponential sums over different bases");
  std::vector<std::pair<FreqVector, Complex>> out;
  out.reserve(terms_.size() * other.terms_.size());
  for (const auto& [va, qa] : terms_)
    for (const auto& [vb, qb] : other.terms_) out.emplace_back(va + vb, qa * qb);
  return make_allow_empty(basis_, out);
}

ExpSum ExpSum::plus(const ExpSum& other) const {
  if (!basis_->same_as(*other.basis_))
    throw BasisMismatch("cannot add exponential sums over different bases");
  std::vector<std::pair<FreqVector, Complex>> out;
  out.reserve(terms_.size() + other.terms_.size());
  for (const auto& [vec, q] : terms_) out.emplace_back(vec, q);
  for (const auto& [vec, q] : other.terms_) out.emplace_back(vec, q);
  return make_allow_empty(basis_, out);
}

ExpSum ExpSum::scaled(Complex factor) const {
  std::vector<std::pair<FreqVector, Complex>> out;
  out.reserve(terms_.size());
  for (const auto& [vec, q] : terms_) out.emplace_back(vec, factor * q);
  return make_allow_empty(basis_, out);
}

ExpSum::Extremes ExpSum::spectrum_extremes() const {
  if (terms_.empty()) throw EmptySum("spectrum_extremes of the zero sum");
  auto it = terms_.begin();
  FreqVector min_vec = it->first, max_vec = it->first;
  for (++it; it != terms_.end(); ++it) {
    if (basis_->compare_values(it->first, min_vec) < 0) min_vec = it->first;
    if (basis_->compare_values(it->first, max_vec) > 0) max_vec = it->first;
  }
  return Extremes{min_vec, max_vec, basis_->value_double(min_vec), basis_->value_double(max_vec)};
}

bool ExpSum::same_terms(const ExpSum& other, double coeff_tol) const {
  if (terms_.size() != other.terms_.size()) return false;
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  for (; a != terms_.end(); ++a, ++b) {
    if (a->first != b->first) return false;
    if (std::abs(a->second - b->second) > coeff_tol) return false;
  }
  return true;
}

}  // namespace sinefactor
