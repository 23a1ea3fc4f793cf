#include "sinefactor/json_io.hpp"

#include <sstream>

#include "sinefactor/errors.hpp"

namespace sinefactor {

namespace {
Json complex_json(Complex c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

Json freq_json(const FreqVector& v) {
  Json arr = Json::array();
  for (const auto& r : v.coeffs) arr.push_back(r.to_string());
  return arr;
}

FreqVector freq_from_json(const Json& arr) {
  FreqVector v;
  for (const auto& e : arr) v.coeffs.push_back(Rational::parse(e.get<std::string>()));
  return v;
}
}  // namespace

Json to_json(const ExpSum& q) {
  Json basis = Json::array();
  for (size_t i = 0; i < q.basis()->size(); ++i) {
    const auto& e = q.basis()->entry(i);
    basis.push_back(Json{{"name", e.name}, {"value", e.decimal}});
  }
  Json terms = Json::array();
  for (const auto& [vec, coeff] : q.terms()) {
    terms.push_back(
        Json{{"freq", freq_json(vec)}, {"re", coeff.real()}, {"im", coeff.imag()}});
  }
  return Json{{"basis", basis}, {"terms", terms}};
}

ExpSum expsum_from_json(const Json& j, mpfr_prec_t precision) {
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& e : j.at("basis"))
    entries.emplace_back(e.at("name").get<std::string>(), e.at("value").get<std::string>());
  BasisPtr basis = make_basis(std::move(entries), true, precision);
  std::vector<std::pair<FreqVector, Complex>> terms;
  for (const auto& t : j.at("terms"))
    terms.emplace_back(freq_from_json(t.at("freq")),
                       Complex(t.at("re").get<double>(), t.at("im").get<double>()));
  return ExpSum::make(basis, terms);
}

Json to_json(const HExpansion& h) {
  Json atoms = Json::array();
  for (const auto& a : h.atoms()) {
    atoms.push_back(Json{{"gamma_vec", freq_json(a.gamma)},
                         {"gamma", a.gamma_value},
                         {"re", a.h.real()},
                         {"im", a.h.imag()}});
  }
  return Json{{"halfplane", h.halfplane() == HalfPlane::Upper ? "upper" : "lower"},
              {"h0", complex_json(h.h0())},
              {"cutoff", h.cutoff()},
              {"atoms", atoms}};
}

Json to_json(const GrowthReport& g) {
  return Json{{"radii", g.radii},
              {"R", g.R_values},
              {"ratio", g.ratio_profile},
              {"slope_estimate", g.slope_estimate},
              {"decades", g.decades}};
}

Json to_json(const MeyerReport& m) {
  return Json{{"verdict", verdict_name(m.verdict)},
              {"slope_estimate", m.slope_estimate},
              {"top_decade_ratio_spread", m.top_decade_ratio_spread},
              {"full_range_ratio_increase", m.full_range_ratio_increase},
              {"growth", to_json(m.data)}};
}

Json to_json(const ZeroSet& z) {
  Json zeros = Json::array();
  for (const auto& x : z.zeros())
    zeros.push_back(Json{{"x", x.location}, {"multiplicity", x.multiplicity}});
  return Json{{"window", Json::array({z.x_lo(), z.x_hi()})},
              {"eta", z.eta()},
              {"certified", z.certified()},
              {"zeros", zeros}};
}

Json to_json(const CertifyReport& c) {
  return Json{{"certified", c.certified},
              {"rect_count", c.rect_count},
              {"real_count", c.real_count},
              {"unit_strip_max", c.unit_strip_max},
              {"eta", c.eta_used},
              {"zeros", to_json(c.zeros)}};
}

Json to_json(const AtomicMeasure& m) {
  Json atoms = Json::array();
  for (const auto& a : m.atoms()) {
    atoms.push_back(Json{{"gamma_vec", freq_json(a.gamma)},
                         {"gamma", a.gamma_value},
                         {"re", a.mass.real()},
                         {"im", a.mass.imag()}});
  }
  return Json{{"cutoff", m.cutoff()}, {"atoms", atoms}};
}

Json to_json(const DiffractionReport& d) {
  Json entries = Json::array();
  for (const auto& e : d.entries) {
    entries.push_back(Json{{"gamma", e.gamma},
                           {"formula", complex_json(e.formula_mass)},
                           {"empirical", complex_json(e.empirical_mass)},
                           {"abs_error", e.abs_error}});
  }
  return Json{{"window_L", d.window_L},
              {"weight", d.weight},
              {"max_abs_error", d.max_abs_error()},
              {"entries", entries}};
}

Json to_json(const SineProductForm& f) {
  Json factors = Json::array();
  for (const auto& fac : f.factors) {
    factors.push_back(Json{{"alpha_over_pi", freq_json(fac.alpha_over_pi)},
                           {"alpha", fac.alpha},
                           {"beta", fac.beta},
                           {"multiplicity", fac.multiplicity}});
  }
  return Json{{"C", complex_json(f.C)}, {"a", f.a}, {"factors", factors}, {"rendering", f.render()}};
}

Json to_json(const ProgressionSet& p) {
  Json progs = Json::array();
  for (const auto& pr : p.progressions) {
    progs.push_back(
        Json{{"period", pr.period}, {"offset", pr.offset}, {"multiplicity", pr.multiplicity}});
  }
  return Json{{"progressions", progs},
              {"exceptional_plus", p.exceptional_plus},
              {"exceptional_minus", p.exceptional_minus}};
}

Json to_json(const ConsistencyReport& c) {
  Json matched = Json::array();
  for (const auto& m : c.matched) {
    matched.push_back(Json{{"factor", m.factor_index},
                           {"progression", m.progression_index},
                           {"period_error", m.period_error}});
  }
  return Json{{"matched", matched},
              {"unmatched_factors", c.unmatched_factors},
              {"unmatched_progressions", c.unmatched_progressions},
              {"fully_matched", c.fully_matched()}};
}

Json to_json(const VerifyReport& v) {
  return Json{{"max_abs_residual", v.max_abs_residual},
              {"samples_used", v.samples_used},
              {"samples_requested", v.samples_requested}};
}

Json to_json(const SecularSpec& s) {
  Json unitary = Json::array();  // row-major [re, im] pairs
  for (const auto& row : s.unitary)
    for (const auto& u : row) unitary.push_back(Json::array({u.real(), u.imag()}));
  return Json{{"n", s.n}, {"lengths", s.lengths}, {"seed", s.seed}, {"unitary", unitary}};
}

SecularSpec secular_spec_from_json(const Json& j) {
  SecularSpec s;
  s.n = j.at("n").get<int>();
  for (const auto& l : j.at("lengths")) s.lengths.push_back(l.get<std::string>());
  s.seed = j.value("seed", 0ull);
  const auto& u = j.at("unitary");
  if (static_cast<int>(u.size()) != s.n * s.n)
    throw InvalidInput("secular spec unitary has wrong size");
  s.unitary.assign(s.n, std::vector<Complex>(s.n));
  for (int r = 0; r < s.n; ++r)
    for (int c = 0; c < s.n; ++c) {
      const auto& cell = u[r * s.n + c];
      s.unitary[r][c] = Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  return s;
}

std::string growth_csv(const GrowthReport& g) {
  std::ostringstream os;
  os.precision(17);
  os << "r,R,R_over_r\n";
  for (size_t i = 0; i < g.radii.size(); ++i)
    os << g.radii[i] << "," << g.R_values[i] << "," << g.ratio_profile[i] << "\n";
  return os.str();
}

std::string zeros_csv(const ZeroSet& z) {
  std::ostringstream os;
  os.precision(17);
  os << "location,multiplicity\n";
  for (const auto& x : z.zeros()) os << x.location << "," << x.multiplicity << "\n";
  return os.str();
}

std::string diffraction_csv(const DiffractionReport& d) {
  std::ostringstream os;
  os.precision(17);
  os << "gamma,formula_re,formula_im,empirical_re,empirical_im,abs_error\n";
  for (const auto& e : d.entries) {
    os << e.gamma << "," << e.formula_mass.real() << "," << e.formula_mass.imag() << ","
       << e.empirical_mass.real() << "," << e.empirical_mass.imag() << "," << e.abs_error << "\n";
  }
  return os.str();
}

std::string plot_data(const AtomicMeasure& m) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& a : m.atoms()) os << a.gamma_value << " " << std::abs(a.mass) << "\n";
  return os.str();
}

}  // namespace sinefactor
