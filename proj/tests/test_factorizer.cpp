#include <doctest.h>

#include <cmath>
#include <random>

#include "sinefactor/errors.hpp"
#include "sinefactor/factorize.hpp"
#include "sinefactor/generate.hpp"
#include "test_helpers.hpp"

using namespace sinefactor;
using namespace sf_test;

TEST_CASE("peeling sin(pi z) yields one factor and an empty residual") {
  HExpansion up = h_expansion(sin_pi_z(), HalfPlane::Upper, 20.0);
  PeelResult r = peel_sine_factors(up);
  REQUIRE(r.factors.size() == 1);
  CHECK(r.factors[0].alpha == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(r.factors[0].beta == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.factors[0].multiplicity == 1);
  CHECK(r.residual.total_mass() < 1e-9);
}

TEST_CASE("peeling a squared shifted sine") {
  auto basis = basis_one();
  SineProductForm form = simple_form(basis, {make_factor(basis, 0, Rational(1), 0.3, 2)});
  ExpSum Q = build_sine_product(form);
  HExpansion up = h_expansion(Q, HalfPlane::Upper, 25.0);
  PeelResult r = peel_sine_factors(up);
  REQUIRE(r.factors.size() == 1);
  CHECK(r.factors[0].multiplicity == 2);
  CHECK(r.factors[0].beta == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(r.residual.total_mass() < 1e-9);
}

TEST_CASE("two incommensurable factors come back in alpha order") {
  auto b2 = basis_one_sqrt2();
  SineProductForm form = simple_form(
      b2, {make_factor(b2, 0, Rational(1), 0.0, 1), make_factor(b2, 1, Rational(1), 0.5, 1)});
  ExpSum Q = build_sine_product(form);
  HExpansion up = h_expansion(Q, HalfPlane::Upper, 25.0);
  PeelResult r = peel_sine_factors(up);
  REQUIRE(r.factors.size() == 2);
  CHECK(r.factors[0].alpha == doctest::Approx(M_PI));
  CHECK(r.factors[1].alpha == doctest::Approx(M_PI * std::sqrt(2.0)));
  CHECK(r.factors[1].beta == doctest::Approx(0.5).epsilon(1e-9));
  // alpha recovered exactly as basis vectors
  CHECK(r.factors[0].alpha_over_pi == FreqVector::unit(2, 0, Rational(1)));
  CHECK(r.factors[1].alpha_over_pi == FreqVector::unit(2, 1, Rational(1)));
}

TEST_CASE("rationally related factors peel through exact collision handling") {
  // sin(pi z) * sin(2 pi z + 0.4): atoms collide on the even integers
  auto basis = basis_one();
  SineProductForm form = simple_form(
      basis,
      {make_factor(basis, 0, Rational(1), 0.0, 1), make_factor(basis, 0, Rational(2), 0.4, 1)});
  ExpSum Q = build_sine_product(form);
  HExpansion up = h_expansion(Q, HalfPlane::Upper, 30.0);
  PeelResult r = peel_sine_factors(up);
  REQUIRE(r.factors.size() == 2);
  CHECK(r.factors[0].alpha == doctest::Approx(M_PI));
  CHECK(r.factors[1].alpha == doctest::Approx(2.0 * M_PI));
  CHECK(r.factors[1].beta == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(r.residual.total_mass() < 1e-8);
}

TEST_CASE("secular example is not a sine product and reports residual mass") {
  SecularSpec spec = make_secular_spec(
      3, {"1.0", builtin_constant_decimal("sqrt2"), builtin_constant_decimal("sqrt3")}, 42);
  SecularOptions opts;
  opts.certify = false;
  ExpSum Q = secular_expsum(spec, opts);
  HExpansion up = h_expansion(Q, HalfPlane::Upper, 8.0);
  try {
    peel_sine_factors(up);
    FAIL("expected NotASineProduct");
  } catch (const NotASineProduct& e) {
    CHECK(e.residual_mass > 0.0);
    CHECK(e.residual != nullptr);
    CHECK(!e.reason.empty());
  }
}

TEST_CASE("scale recovery: plain, shifted, and doctored prefactors") {
  auto basis = basis_one();
  // Q = 3 sin(pi z)
  ExpSum Q3 = sin_pi_z(basis).scaled(Complex(3, 0));
  HExpansion up3 = h_expansion(Q3, HalfPlane::Upper, 20.0);
  PeelResult p3 = peel_sine_factors(up3);
  auto [C3, a3] = recover_scale(Q3, up3, p3.factors);
  CHECK(std::abs(C3 - Complex(3, 0)) < 1e-10);
  CHECK(std::abs(a3) < 1e-10);

  // Q = 2 e^{i 0.7 z} sin(pi z): a/(2 pi) = 0.35/pi needs pi in the basis
  auto bp = make_basis({{"one", "1"}, {"inv_pi", (Real::from_int(1) / Real::pi()).to_string(80)}});
  FreqVector a_vec = FreqVector::unit(2, 1, Rational(7, 20));  // 0.35/pi
  SineProductForm form =
      simple_form(bp, {make_factor(bp, 0, Rational(1), 0.0, 1)}, Complex(2, 0), 0.7, a_vec);
  ExpSum Q = build_sine_product(form);
  HExpansion up = h_expansion(Q, HalfPlane::Upper, 20.0);
  PeelResult p = peel_sine_factors(up);
  auto [C, a] = recover_scale(Q, up, p.factors);
  CHECK(std::abs(C - Complex(2, 0)) < 1e-8);
  CHECK(a == doctest::Approx(0.7).epsilon(1e-8));

  // an expansion whose h0 acquired a real part cannot come from a real shift
  HExpansion doctored(up3.basis(), HalfPlane::Upper, up3.h0() + Complex(0.1, 0.0),
                      std::vector<HAtom>(up3.atoms()), up3.cutoff());
  CHECK_THROWS_AS(recover_scale(Q3, doctored, p3.factors), InconsistentPrefactor);
}

TEST_CASE("verify_form: round trip, perturbation sensitivity, pure prefactor") {
  auto b2 = basis_one_sqrt2();
  SineProductForm form = simple_form(
      b2, {make_factor(b2, 0, Rational(1), 0.4, 1), make_factor(b2, 1, Rational(1), 1.2, 1)},
      Complex(1.5, 0.5));
  ExpSum Q = build_sine_product(form);
  VerifyReport ok = verify_form(Q, form);
  CHECK(ok.max_abs_residual < 1e-8);

  SineProductForm wobbled = form;
  wobbled.factors[0].beta += 1e-3;
  VerifyReport bad = verify_form(Q, wobbled);
  CHECK(bad.max_abs_residual > 1e-4);

  // J = 0: Q = C e^{i a z}
  auto basis = basis_one();
  FreqVector a_vec = FreqVector::unit(1, 0, Rational(1, 2));
  SineProductForm pure = simple_form(basis, {}, Complex(0.0, 2.0), M_PI, a_vec);
  ExpSum Qp = build_sine_product(pure);
  CHECK(verify_form(Qp, pure).max_abs_residual < 1e-12);
}

TEST_CASE("progression decomposition of the integer lattice") {
  std::vector<Zero> zs;
  for (int n = -20; n <= 20; ++n) zs.push_back({static_cast<double>(n), 1});
  ZeroSet lattice = ZeroSet::synthetic(-20.4, 20.4, zs);
  ProgressionSet ps = decompose_zero_set(lattice);
  REQUIRE(ps.progressions.size() == 1);
  CHECK(ps.progressions[0].period == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ps.progressions[0].offset == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(ps.progressions[0].multiplicity == 1);
  CHECK(ps.exceptional_plus.empty());
  CHECK(ps.exceptional_minus.empty());
}

TEST_CASE("decomposition of two interleaved irrational progressions") {
  // zeros of sin(pi z) sin(sqrt2 pi z): Z union (1/sqrt2) Z, coincident at 0
  const double s = 1.0 / std::sqrt(2.0);
  std::map<double, int> mult;
  for (int n = -30; n <= 30; ++n) mult[static_cast<double>(n)] += 1;
  for (int n = -42; n <= 42; ++n) {
    double x = n * s;
    bool merged = false;
    for (auto& [loc, m] : mult)
      if (std::abs(loc - x) < 1e-12) {
        m += 1;
        merged = true;
      }
    if (!merged && std::abs(x) <= 30.0) mult[x] += 1;
  }
  std::vector<Zero> zs;
  for (const auto& [loc, m] : mult) zs.push_back({loc, m});
  ZeroSet set = ZeroSet::synthetic(-30.2, 30.2, zs);

  ProgressionSet ps = decompose_zero_set(set);
  REQUIRE(ps.progressions.size() == 2);
  CHECK(ps.progressions[0].period == doctest::Approx(s).epsilon(1e-8));
  CHECK(ps.progressions[1].period == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(ps.exceptional_plus.empty());
  CHECK(ps.exceptional_minus.empty());
}

TEST_CASE("perturbed zeros surface as exceptional points") {
  std::vector<Zero> zs;
  for (int n = -20; n <= 20; ++n) {
    double x = n;
    if (n == 3) x += 1e-2;
    if (n == -7) x -= 1e-2;
    zs.push_back({x, 1});
  }
  ZeroSet lattice = ZeroSet::synthetic(-20.4, 20.4, zs);

  // default configuration rejects exceptional points on certified input
  CHECK_THROWS_AS(decompose_zero_set(lattice), NoProgressionStructure);

  DecomposeOptions opts;
  opts.allow_exceptional = true;
  ProgressionSet ps = decompose_zero_set(lattice, 1e-6, opts);
  REQUIRE(ps.progressions.size() == 1);
  CHECK(ps.exceptional_plus.size() == 2);   // the two perturbed zeros
  CHECK(ps.exceptional_minus.size() == 2);  // their vacated slots
}

TEST_CASE("decomposition refuses uncertified zero sets") {
  std::vector<Zero> zs;
  for (int n = -15; n <= 15; ++n) zs.push_back({static_cast<double>(n), 1});
  ZeroSet uncertified(-15.4, 15.4, 1.0, zs, false);
  CHECK_THROWS_AS(decompose_zero_set(uncertified), RequiresCertification);
}

TEST_CASE("a random cloud has no progression structure") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-25.0, 25.0);
  std::vector<double> xs;
  for (int i = 0; i < 40; ++i) xs.push_back(u(rng));
  std::sort(xs.begin(), xs.end());
  std::vector<Zero> zs;
  for (double x : xs) zs.push_back({x, 1});
  ZeroSet cloud = ZeroSet::synthetic(-25.5, 25.5, zs);
  CHECK_THROWS_AS(decompose_zero_set(cloud), NoProgressionStructure);
}

TEST_CASE("consistency check pairs factors with progressions") {
  auto b2 = basis_one_sqrt2();
  SineProductForm form = simple_form(
      b2, {make_factor(b2, 0, Rational(1), 0.0, 1), make_factor(b2, 1, Rational(1), 0.0, 1)});
  ProgressionSet ps;
  ps.progressions.push_back({1.0, 0.0, 1});
  ps.progressions.push_back({1.0 / std::sqrt(2.0), 0.0, 1});
  ConsistencyReport rep = consistency_check(form, ps);
  CHECK(rep.fully_matched());
  CHECK(rep.matched.size() == 2);

  // dropping one factor leaves one unmatched progression
  SineProductForm partial = form;
  partial.factors.pop_back();
  ConsistencyReport rep2 = consistency_check(partial, ps);
  CHECK(!rep2.fully_matched());
  CHECK(rep2.unmatched_progressions.size() == 1);

  // J = 0 and no progressions: trivially consistent
  SineProductForm empty_form = simple_form(b2, {});
  ConsistencyReport rep3 = consistency_check(empty_form, ProgressionSet{});
  CHECK(rep3.fully_matched());
}

TEST_CASE("round trip over random forms") {
  FormSampler sampler(2024);
  for (int round = 0; round < 8; ++round) {
    SineProductForm form = sampler.next();
    ExpSum Q = build_sine_product(form);
    double min_gen = 1e300;
    for (const auto& f : form.factors)
      min_gen = std::min(min_gen, form.basis->value_double(f.alpha_over_pi));
    double cutoff = std::max(25.0 * min_gen, 10.0);

    HExpansion up = h_expansion(Q, HalfPlane::Upper, cutoff);
    PeelResult peel = peel_sine_factors(up);
    auto [C, a] = recover_scale(Q, up, peel.factors);

    SineProductForm got;
    got.basis = form.basis;
    got.C = C;
    got.a = a;
    got.factors = peel.factors;
    got.canonicalize();

    REQUIRE(got.factors.size() == form.factors.size());
    for (size_t j = 0; j < got.factors.size(); ++j) {
      CHECK(got.factors[j].alpha_over_pi == form.factors[j].alpha_over_pi);
      CHECK(got.factors[j].multiplicity == form.factors[j].multiplicity);
      double db = std::fmod(std::abs(got.factors[j].beta - form.factors[j].beta), M_PI);
      CHECK(std::min(db, M_PI - db) < 1e-8);
    }
    CHECK(std::abs(got.C - form.C) < 1e-6 * (1.0 + std::abs(form.C)));
    CHECK(std::abs(got.a - form.a) < 1e-6);
    CHECK(verify_form(Q, got).max_abs_residual < 1e-8);
  }
}
