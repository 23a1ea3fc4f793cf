// Command-line front end: expression parsing, pipeline orchestration, and
// machine-readable reports for the sine-product analysis library.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sinefactor/errors.hpp"
#include "sinefactor/factorize.hpp"
#include "sinefactor/generate.hpp"
#include "sinefactor/json_io.hpp"
#include "sinefactor/parse.hpp"

using namespace sinefactor;

namespace {

struct CommonOptions {
  std::vector<std::string> basis_decls;
  std::string expression;
  std::string in_file;       // ExpSum JSON
  std::string secular_file;  // SecularSpec JSON
  double cutoff = 50.0;
  std::vector<double> window{-100.0, 100.0};
  double eta = 1.0;
  double tol = 1e-6;
  double drop_tol = 1e-30;
  int precision = 0;  // mantissa bits for the h-recursion; 0 = native
  uint64_t seed = 12345;
  std::string format = "json";
  std::string out_path;
  std::string plot_path;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_expr = true) {
  if (with_expr) cmd->add_option("expression", o.expression, "expression, e.g. \"sin(pi*z)^2\"");
  cmd->add_option("--basis", o.basis_decls, "basis declaration name=decimal (repeatable)");
  cmd->add_option("--in", o.in_file, "read the input ExpSum from a JSON file (- for stdin)");
  cmd->add_option("--secular", o.secular_file, "read a secular spec JSON and use its ExpSum");
  cmd->add_option("--cutoff", o.cutoff, "frequency cutoff for expansions");
  cmd->add_option("--window", o.window, "real window a b")->expected(2);
  cmd->add_option("--eta", o.eta, "contour half-height");
  cmd->add_option("--tol", o.tol, "peeling / verification tolerance");
  cmd->add_option("--drop-tol", o.drop_tol, "magnitude below which atoms are dropped");
  cmd->add_option("--precision", o.precision, "mantissa bits for the h-recursion (0 = native)");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", o.out_path, "write the report to this path instead of stdout");
  cmd->add_option("--plot-data", o.plot_path, "write (gamma, |mass|) pairs for plotting");
}

ParseOptions parse_opts(const CommonOptions& o) {
  ParseOptions p;
  for (const auto& decl : o.basis_decls) {
    auto eq = decl.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("--basis expects name=decimal, got '" + decl + "'");
    p.basis_decls.emplace_back(decl.substr(0, eq), decl.substr(eq + 1));
  }
  return p;
}

ExpSum load_input(const CommonOptions& o) {
  int sources = !o.expression.empty() + !o.in_file.empty() + !o.secular_file.empty();
  if (sources != 1)
    throw InvalidInput("provide exactly one input: an expression, --in, or --secular");
  if (!o.in_file.empty()) {
    Json j;
    if (o.in_file == "-") {
      j = Json::parse(std::cin);
    } else {
      std::ifstream f(o.in_file);
      if (!f) throw InvalidInput("cannot open " + o.in_file);
      j = Json::parse(f);
    }
    if (j.contains("input")) j = j["input"];  // accept a whole report file
    return expsum_from_json(j);
  }
  if (!o.secular_file.empty()) {
    std::ifstream f(o.secular_file);
    if (!f) throw InvalidInput("cannot open " + o.secular_file);
    Json j = Json::parse(f);
    if (j.contains("secular_spec")) j = j["secular_spec"];
    SecularSpec spec = secular_spec_from_json(j);
    SecularOptions sopts;
    sopts.window_lo = o.window[0] <= -20.0 ? -20.0 : o.window[0];
    sopts.window_hi = o.window[1] >= 20.0 ? 20.0 : o.window[1];
    sopts.eta = o.eta;
    return secular_expsum(spec, sopts);
  }
  return parse_expression(o.expression, parse_opts(o));
}

HOptions h_opts(const CommonOptions& o) {
  HOptions h;
  h.drop_tol = o.drop_tol;
  h.precision_bits = o.precision;
  return h;
}

std::string timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// window edges nudged onto abscissas where |Q| stays clear of zeros
std::pair<double, double> effective_window(const ExpSum& q, const CommonOptions& o) {
  double lo = pick_contour_abscissa(q, o.window[0], 0.25, o.eta);
  double hi = pick_contour_abscissa(q, o.window[1], 0.25, o.eta);
  if (lo >= hi) throw InvalidInput("window is empty after edge placement");
  return {lo, hi};
}

Json report_header(const CommonOptions& o, const ExpSum& q) {
  return Json{{"schema", "sinefactor/1"},
              {"timestamp", timestamp()},
              {"input", to_json(q)},
              {"params",
               Json{{"cutoff", o.cutoff},
                    {"window", o.window},
                    {"eta", o.eta},
                    {"tol", o.tol},
                    {"drop_tol", o.drop_tol},
                    {"precision", o.precision},
                    {"seed", o.seed}}}};
}

void emit(const CommonOptions& o, const std::string& text) {
  std::string t = text;
  if (t.empty() || t.back() != '\n') t += '\n';
  if (o.out_path.empty()) {
    std::cout << t;
  } else {
    std::ofstream f(o.out_path);
    if (!f) throw InvalidInput("cannot write " + o.out_path);
    f << t;
  }
}

void emit_json(const CommonOptions& o, const Json& j) { emit(o, j.dump(2)); }

int run_parse(const CommonOptions& o) {
  ExpSum q = load_input(o);
  Json j = report_header(o, q);
  emit_json(o, j);
  return 0;
}

int run_hcoeffs(const CommonOptions& o) {
  ExpSum q = load_input(o);
  HExpansion up = h_expansion(q, HalfPlane::Upper, o.cutoff, h_opts(o));
  HExpansion lo = h_expansion(q, HalfPlane::Lower, o.cutoff, h_opts(o));
  Json j = report_header(o, q);
  j["upper"] = to_json(up);
  j["lower"] = to_json(lo);
  emit_json(o, j);
  return 0;
}

int run_meyer(const CommonOptions& o) {
  ExpSum q = load_input(o);
  HExpansion up = h_expansion(q, HalfPlane::Upper, o.cutoff, h_opts(o));
  HExpansion lo = h_expansion(q, HalfPlane::Lower, o.cutoff, h_opts(o));
  GrowthReport growth = growth_profile(up, lo, default_radii(o.cutoff));
  MeyerReport verdict = meyer_verdict(growth);
  if (o.format == "csv") {
    emit(o, growth_csv(growth));
  } else {
    Json j = report_header(o, q);
    j["meyer"] = to_json(verdict);
    emit_json(o, j);
  }
  return verdict.verdict == Verdict::Superlinear ? 1 : 0;
}

int run_roots(const CommonOptions& o) {
  ExpSum q = load_input(o);
  auto [lo, hi] = effective_window(q, o);
  CertifyReport rep = certify_real_rooted(q, lo, hi, o.eta);
  if (o.format == "csv") {
    emit(o, zeros_csv(rep.zeros));
  } else {
    Json j = report_header(o, q);
    j["certification"] = to_json(rep);
    emit_json(o, j);
  }
  return 0;
}

int run_fourier(const CommonOptions& o) {
  ExpSum q = load_input(o);
  HExpansion up = h_expansion(q, HalfPlane::Upper, o.cutoff, h_opts(o));
  HExpansion lo = h_expansion(q, HalfPlane::Lower, o.cutoff, h_opts(o));
  AtomicMeasure measure = fourier_atoms(up, lo);
  double L = std::min(-o.window[0], o.window[1]);
  DiffractionReport diff{{}, L, "fejer"};
  if (!measure.empty()) {
    double wlo = pick_contour_abscissa(q, -L - 0.25, 0.2, o.eta);
    double whi = pick_contour_abscissa(q, L + 0.25, 0.2, o.eta);
    ZeroSet zeros = locate_real_zeros(q, wlo, whi, o.eta);
    if (!zeros.certified())
      throw RequiresCertification("zero location on the diffraction window failed certification");
    diff = compare_diffraction(measure, zeros.restricted(-L, L), 10);
  }
  if (!o.plot_path.empty()) {
    std::ofstream f(o.plot_path);
    if (!f) throw InvalidInput("cannot write " + o.plot_path);
    f << plot_data(measure);
  }
  if (o.format == "csv") {
    emit(o, diffraction_csv(diff));
  } else {
    Json j = report_header(o, q);
    j["measure"] = to_json(measure);
    j["diffraction"] = to_json(diff);
    emit_json(o, j);
  }
  return 0;
}

int run_factor(const CommonOptions& o) {
  ExpSum q = load_input(o);
  Json j = report_header(o, q);
  try {
    SineProductForm form = factorize(q, o.cutoff, o.tol);
    VerifyReport verify = verify_form(q, form);
    j["form"] = to_json(form);
    j["verify"] = to_json(verify);
    emit_json(o, j);
    return 0;
  } catch (const NotASineProduct& e) {
    j["not_a_sine_product"] = Json{{"reason", e.reason}, {"residual_mass", e.residual_mass}};
    if (e.residual) j["residual"] = to_json(*e.residual);
    emit_json(o, j);
    return 1;
  }
}

int run_generate(const CommonOptions& o, const std::string& family, int n,
                 std::vector<std::string> lengths) {
  if (family != "secular") throw InvalidInput("only --family secular is supported");
  if (lengths.empty()) {
    // defaults 1, sqrt2, sqrt3, ... give pairwise irrational length ratios
    lengths = {"1.0"};
    const char* names[] = {"sqrt2", "sqrt3", "sqrt5", "e", "pi"};
    for (int i = 1; i < n; ++i) lengths.push_back(builtin_constant_decimal(names[i - 1]));
  }
  SecularSpec spec = make_secular_spec(n, lengths, o.seed);
  ExpSum q = secular_expsum(spec);
  Json j = report_header(o, q);
  j["secular_spec"] = to_json(spec);
  emit_json(o, j);
  return 0;
}

int run_report(const CommonOptions& o) {
  ExpSum q = load_input(o);
  Json j = report_header(o, q);

  HExpansion up = h_expansion(q, HalfPlane::Upper, o.cutoff, h_opts(o));
  HExpansion lo = h_expansion(q, HalfPlane::Lower, o.cutoff, h_opts(o));
  j["upper"] = to_json(up);
  j["lower"] = to_json(lo);

  GrowthReport growth = growth_profile(up, lo, default_radii(o.cutoff));
  MeyerReport verdict = meyer_verdict(growth);
  j["meyer"] = to_json(verdict);

  auto [wlo, whi] = effective_window(q, o);
  CertifyReport cert = certify_real_rooted(q, wlo, whi, o.eta);
  j["certification"] = to_json(cert);

  AtomicMeasure measure = fourier_atoms(up, lo);
  j["measure"] = to_json(measure);
  if (!measure.empty() && cert.certified) {
    double L = std::min(-wlo, whi);
    if (L > 0) {
      ZeroSet clipped = cert.zeros.restricted(-L, L);
      j["diffraction"] = to_json(compare_diffraction(measure, clipped, 10));
    }
  }

  int exit_code = 0;
  try {
    SineProductForm form = factorize(q, o.cutoff, o.tol);
    j["form"] = to_json(form);
    j["verify"] = to_json(verify_form(q, form));
    if (cert.certified && cert.zeros.zeros().size() >= 20) {
      try {
        DecomposeOptions dopts;
        dopts.allow_exceptional = true;
        ProgressionSet progs = decompose_zero_set(cert.zeros, std::max(o.tol, 1e-8), dopts);
        j["progressions"] = to_json(progs);
        j["consistency"] = to_json(consistency_check(form, progs));
      } catch (const Error& e) {
        j["progressions_error"] = Json{{"error", e.name()}, {"message", e.what()}};
      }
    }
  } catch (const NotASineProduct& e) {
    j["not_a_sine_product"] = Json{{"reason", e.reason}, {"residual_mass", e.residual_mass}};
    exit_code = 1;
  }
  if (verdict.verdict == Verdict::Superlinear) exit_code = 1;
  emit_json(o, j);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sine-product structure of exponential sums with only real zeros"};
  app.require_subcommand(1);

  CommonOptions o;
  std::string family = "secular";
  int gen_n = 3;
  std::vector<std::string> gen_lengths;

  auto* c_parse = app.add_subcommand("parse", "parse an expression into its exponential sum");
  auto* c_h = app.add_subcommand("hcoeffs", "half-plane expansions of Q'/Q");
  auto* c_meyer = app.add_subcommand("meyer", "growth profile and linearity verdict");
  auto* c_roots = app.add_subcommand("roots", "locate and certify real zeros");
  auto* c_fourier = app.add_subcommand("fourier", "Fourier atoms and diffraction comparison");
  auto* c_factor = app.add_subcommand("factor", "recover the sine-product form");
  auto* c_gen = app.add_subcommand("generate", "construct test families");
  auto* c_report = app.add_subcommand("report", "full pipeline report");

  for (auto* c : {c_parse, c_h, c_meyer, c_roots, c_fourier, c_factor, c_report})
    add_common(c, o);
  add_common(c_gen, o, false);
  c_gen->add_option("--family", family, "secular");
  c_gen->add_option("--n", gen_n, "dimension (1..6)");
  c_gen->add_option("--lengths", gen_lengths, "edge lengths as decimals");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_parse->parsed()) return run_parse(o);
    if (c_h->parsed()) return run_hcoeffs(o);
    if (c_meyer->parsed()) return run_meyer(o);
    if (c_roots->parsed()) return run_roots(o);
    if (c_fourier->parsed()) return run_fourier(o);
    if (c_factor->parsed()) return run_factor(o);
    if (c_gen->parsed()) return run_generate(o, family, gen_n, gen_lengths);
    if (c_report->parsed()) return run_report(o);
  } catch (const Error& e) {
    std::cerr << Json{{"error", e.name()}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "Unexpected"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return 2;
}
