#include "sinefactor/basis.hpp"

#include <iostream>
#include <mutex>
#include <set>
#include <sstream>

#include "sinefactor/errors.hpp"

namespace sinefactor {

std::string FreqVector::to_string() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (i) os << ", ";
    os << coeffs[i].to_string();
  }
  os << ")";
  return os.str();
}

namespace {
std::function<void(const std::string&)>& sink_ref() {
  static std::function<void(const std::string&)> sink = [](const std::string& m) {
    std::cerr << "[sinefactor] warning: " << m << "\n";
  };
  return sink;
}
std::mutex sink_mutex;
}  // namespace

void set_diagnostic_sink(std::function<void(const std::string&)> sink) {
  std::lock_guard<std::mutex> lock(sink_mutex);
  sink_ref() = std::move(sink);
}

void emit_diagnostic(const std::string& message) {
  std::lock_guard<std::mutex> lock(sink_mutex);
  if (sink_ref()) sink_ref()(message);
}

FrequencyBasis::FrequencyBasis(std::vector<std::pair<std::string, std::string>> entries,
                               bool independence_claimed, mpfr_prec_t prec)
    : independence_claimed_(independence_claimed),
      prec_(prec),
      near_tol_(Real::from_string("1e-40", prec)) {
  if (entries.empty()) throw InvalidInput("frequency basis needs at least one entry");
  std::set<std::string> names;
  for (auto& [name, decimal] : entries) {
    if (name.empty()) throw InvalidInput("basis entry with empty name");
    if (!names.insert(name).second) throw InvalidInput("duplicate basis name '" + name + "'");
    Real value = Real::from_string(decimal, prec);
    if (value.sign() <= 0) throw InvalidInput("basis entry '" + name + "' must be positive");
    entries_.push_back(Entry{name, decimal, std::move(value)});
  }
  for (size_t i = 0; i < entries_.size(); ++i)
    for (size_t j = i + 1; j < entries_.size(); ++j)
      if (entries_[i].value == entries_[j].value)
        throw InvalidInput("basis entries '" + entries_[i].name + "' and '" + entries_[j].name +
                           "' have equal values");
}

std::optional<size_t> FrequencyBasis::index_of(const std::string& name) const {
  for (size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].name == name) return i;
  return std::nullopt;
}

Real FrequencyBasis::value_of(const FreqVector& v) const {
  if (v.size() != entries_.size())
    throw BasisMismatch("frequency vector length " + std::to_string(v.size()) +
                        " does not match basis size " + std::to_string(entries_.size()));
  Real acc(prec_);
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (v.coeffs[i].is_zero()) continue;
    Real c = Real::from_ratio(v.coeffs[i].num, v.coeffs[i].den, prec_);
    acc.add_mul(c, entries_[i].value);
  }
  return acc;
}

double FrequencyBasis::value_double(const FreqVector& v) const { return value_of(v).to_double(); }

int FrequencyBasis::compare_values(const FreqVector& a, const FreqVector& b) const {
  Real va = value_of(a);
  Real vb = value_of(b);
  int c = va.cmp(vb);
  if (a != b && (va - vb).abs() < near_tol_) {
    emit_diagnostic("distinct frequency vectors " + a.to_string() + " and " + b.to_string() +
                    " have values closer than 1e-40; declared basis may be rationally dependent");
  }
  return c;
}

bool FrequencyBasis::same_as(const FrequencyBasis& o) const {
  if (this == &o) return true;
  if (entries_.size() != o.entries_.size()) return false;
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name != o.entries_[i].name) return false;
    if (!(entries_[i].value == o.entries_[i].value)) return false;
  }
  return true;
}

BasisPtr make_basis(std::vector<std::pair<std::string, std::string>> entries,
                    bool independence_claimed, mpfr_prec_t prec) {
  return std::make_shared<FrequencyBasis>(std::move(entries), independence_claimed, prec);
}

bool is_builtin_constant(const std::string& name) {
  return name == "pi" || name == "sqrt2" || name == "sqrt3" || name == "sqrt5" || name == "e";
}

std::string builtin_constant_decimal(const std::string& name) {
  const mpfr_prec_t prec = 420;  // > 120 digits
  Real v(prec);
  if (name == "pi")
    v = Real::pi(prec);
  else if (name == "sqrt2")
    v = Real::sqrt_of(2, prec);
  else if (name == "sqrt3")
    v = Real::sqrt_of(3, prec);
  else if (name == "sqrt5")
    v = Real::sqrt_of(5, prec);
  else if (name == "e")
    v = Real::e(prec);
  else
    throw InvalidInput("unknown builtin constant '" + name + "'");
  return v.to_string(110);
}

}  // namespace sinefactor
