#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef SINEFACTOR_CLI
#error "SINEFACTOR_CLI must point at the built binary"
#endif

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(SINEFACTOR_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

nlohmann::json strip_timestamp(nlohmann::json j) {
  j.erase("timestamp");
  return j;
}

}  // namespace

TEST_CASE("factor subcommand recovers sin^2(pi z) and exits 0") {
  RunResult r = run_cli("factor \"sin(pi*z)^2\" --cutoff 50");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("schema") == "sinefactor/1");
  CHECK(j.at("form").at("factors").size() == 1);
  CHECK(j.at("form").at("factors")[0].at("multiplicity") == 2);
  CHECK(j.at("verify").at("max_abs_residual").get<double>() < 1e-8);
  CHECK(j.at("params").at("cutoff") == 50.0);
  CHECK(j.contains("input"));  // exact input embedded in the report
}

TEST_CASE("roots subcommand emits the zeros of sin(pi z) as CSV") {
  RunResult r = run_cli("roots \"sin(pi*z)\" --window -5.5 5.5 --format csv");
  CHECK(r.exit_code == 0);
  int lines = 0;
  for (char c : r.out)
    if (c == '\n') ++lines;
  CHECK(lines == 12);  // header + 11 zeros
  CHECK(r.out.rfind("location,multiplicity", 0) == 0);
}

TEST_CASE("generate + meyer: the secular family is superlinear with exit code 1") {
  RunResult gen = run_cli("generate --family secular --n 2 --seed 11 --out /tmp/sf_sec2.json");
  CHECK(gen.exit_code == 0);

  RunResult meyer = run_cli("meyer --secular /tmp/sf_sec2.json --cutoff 25");
  CHECK(meyer.exit_code == 1);
  auto j = nlohmann::json::parse(meyer.out);
  CHECK(j.at("meyer").at("verdict") == "Superlinear");
}

TEST_CASE("factor on a non-product input reports the residual and exits 1") {
  RunResult r = run_cli("factor --secular /tmp/sf_sec2.json --cutoff 8");
  CHECK(r.exit_code == 1);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.contains("not_a_sine_product"));
  CHECK(j.at("not_a_sine_product").at("residual_mass").get<double>() > 0.0);
}

TEST_CASE("reports are deterministic modulo the timestamp") {
  RunResult a = run_cli("hcoeffs \"sin(pi*z)*sin(sqrt2*pi*z+0.5)\" --cutoff 12");
  RunResult b = run_cli("hcoeffs \"sin(pi*z)*sin(sqrt2*pi*z+0.5)\" --cutoff 12");
  CHECK(a.exit_code == 0);
  auto ja = strip_timestamp(nlohmann::json::parse(a.out));
  auto jb = strip_timestamp(nlohmann::json::parse(b.out));
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("fourier subcommand writes plot data") {
  RunResult r = run_cli(
      "fourier \"sin(pi*z)\" --cutoff 10 --window -80 80 --plot-data /tmp/sf_plot.txt");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("diffraction").at("max_abs_error").get<double>() < 5e-3);
  std::ifstream plot("/tmp/sf_plot.txt");
  REQUIRE(plot.good());
  int lines = 0;
  std::string line;
  while (std::getline(plot, line)) ++lines;
  CHECK(lines == 21);  // integers -10..10
}

TEST_CASE("syntax errors surface as exit code 2") {
  RunResult r = run_cli("parse \"sin((1+i)*z)\"");
  CHECK(r.exit_code == 2);
  RunResult r2 = run_cli("roots \"sika(pi*z)\"");
  CHECK(r2.exit_code == 2);
}
