#include <doctest.h>

#include <cmath>

#include "sinefactor/errors.hpp"
#include "sinefactor/generate.hpp"
#include "sinefactor/hexpansion.hpp"
#include "test_helpers.hpp"

using namespace sinefactor;
using namespace sf_test;

namespace {

// max |h_a - h_b| over the union of atom frequencies of two expansions
double expansion_diff(const HExpansion& a, const HExpansion& b) {
  double worst = std::abs(a.h0() - b.h0());
  auto scan = [&](const HExpansion& x, const HExpansion& y) {
    for (const auto& atom : x.atoms()) {
      const HAtom* other = y.find(atom.gamma);
      Complex ref = other ? other->h : Complex(0, 0);
      worst = std::max(worst, std::abs(atom.h - ref));
    }
  };
  scan(a, b);
  scan(b, a);
  return worst;
}

}  // namespace

TEST_CASE("difference semigroup: integer, mixed, and deduplicated generators") {
  auto basis = basis_one();
  // spectrum {0, 1} -> generators {1}
  std::vector<FreqVector> spec{FreqVector(1), FreqVector::unit(1, 0, Rational(1))};
  auto sg = difference_semigroup(spec, Anchor::Min, 5.5, *basis);
  REQUIRE(sg.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(sg[i].value_d == doctest::Approx(i + 1.0));

  // spectrum {0, 1, sqrt2} against a brute-force enumeration of m + n*sqrt2 <= 3
  auto b2 = basis_one_sqrt2();
  std::vector<FreqVector> spec2{FreqVector(2), FreqVector::unit(2, 0, Rational(1)),
                                FreqVector::unit(2, 1, Rational(1))};
  auto sg2 = difference_semigroup(spec2, Anchor::Min, 3.0, *b2);
  std::vector<double> oracle;
  const double s2 = std::sqrt(2.0);
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n) {
      double v = m + n * s2;
      if (v > 0 && v <= 3.0 + 1e-12) oracle.push_back(v);
    }
  std::sort(oracle.begin(), oracle.end());
  REQUIRE(sg2.size() == oracle.size());
  for (size_t i = 0; i < oracle.size(); ++i)
    CHECK(sg2[i].value_d == doctest::Approx(oracle[i]).epsilon(1e-12));

  // rational dedup: generators {1/2, 3/2}; 3*(1/2) collides with (3/2)
  std::vector<FreqVector> spec3{FreqVector(1), FreqVector::unit(1, 0, Rational(1, 2)),
                                FreqVector::unit(1, 0, Rational(3, 2))};
  auto sg3 = difference_semigroup(spec3, Anchor::Min, 2.0, *basis);
  REQUIRE(sg3.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(sg3[i].value_d == doctest::Approx(0.5 * (i + 1)));

  CHECK_THROWS_AS(difference_semigroup(spec, Anchor::Min, 0.0, *basis), BadCutoff);
}

TEST_CASE("max anchoring mirrors min anchoring on a symmetric spectrum") {
  auto basis = basis_one();
  std::vector<FreqVector> spec{FreqVector::unit(1, 0, Rational(-1)), FreqVector(1),
                               FreqVector::unit(1, 0, Rational(1))};
  auto lo = difference_semigroup(spec, Anchor::Min, 6.0, *basis);
  auto hi = difference_semigroup(spec, Anchor::Max, 6.0, *basis);
  // generators {1, 2} from either end
  REQUIRE(lo.size() == 6);
  REQUIRE(hi.size() == 6);
  for (size_t i = 0; i < lo.size(); ++i) {
    CHECK(lo[i].value_d == doctest::Approx(i + 1.0));
    CHECK(hi[i].value_d == doctest::Approx(i + 1.0));
    CHECK(hi[i].vec == lo[i].vec);  // same positive differences from either end
  }
}

TEST_CASE("h-expansion of sin(pi z): the cotangent series, both half-planes") {
  ExpSum sine = sin_pi_z();

  HExpansion up = h_expansion(sine, HalfPlane::Upper, 10.0);
  CHECK(std::abs(up.h0() - Complex(0.0, -M_PI)) < 1e-14);
  REQUIRE(up.atoms().size() == 10);
  for (int n = 0; n < 10; ++n) {
    CHECK(up.atoms()[n].gamma_value == doctest::Approx(n + 1.0));
    CHECK(std::abs(up.atoms()[n].h - Complex(0.0, -2.0 * M_PI)) < 1e-10);
  }

  HExpansion lo = h_expansion(sine, HalfPlane::Lower, 10.0);
  CHECK(std::abs(lo.h0() - Complex(0.0, M_PI)) < 1e-14);
  REQUIRE(lo.atoms().size() == 10);
  for (int n = 0; n < 10; ++n) {
    CHECK(lo.atoms()[n].gamma_value == doctest::Approx(-10.0 + n));
    CHECK(std::abs(lo.atoms()[n].h - Complex(0.0, 2.0 * M_PI)) < 1e-10);
  }
}

TEST_CASE("h-expansion of a single exponential has no atoms") {
  auto basis = basis_one();
  FreqVector w = FreqVector::unit(1, 0, Rational(3, 4));
  ExpSum single = ExpSum::make(basis, {{w, Complex(2.0, 1.0)}});
  HExpansion up = h_expansion(single, HalfPlane::Upper, 20.0);
  CHECK(up.atoms().empty());
  CHECK(std::abs(up.h0() - Complex(0.0, 2.0 * M_PI * 0.75)) < 1e-14);
}

TEST_CASE("closed form: sin(pi z), squared factor, bare exponential") {
  auto basis = basis_one();
  SineProductForm f1 = simple_form(basis, {make_factor(basis, 0, Rational(1), 0.0, 1)});
  HExpansion up = sine_product_h_closed_form(f1, HalfPlane::Upper, 8.0);
  CHECK(std::abs(up.h0() - Complex(0.0, -M_PI)) < 1e-14);
  REQUIRE(up.atoms().size() == 8);
  for (const auto& a : up.atoms()) CHECK(std::abs(a.h - Complex(0.0, -2.0 * M_PI)) < 1e-14);

  // sin^2(pi z + 0.3): atoms -4 pi i e^{0.6 i n}
  SineProductForm f2 = simple_form(basis, {make_factor(basis, 0, Rational(1), 0.3, 2)});
  HExpansion up2 = sine_product_h_closed_form(f2, HalfPlane::Upper, 6.0);
  REQUIRE(up2.atoms().size() == 6);
  for (int n = 1; n <= 6; ++n) {
    Complex expect = Complex(0.0, -4.0 * M_PI) * std::exp(Complex(0.0, 0.6 * n));
    CHECK(std::abs(up2.atoms()[n - 1].h - expect) < 1e-13);
  }

  // J = 0 with shift a: h0 = i a, no atoms
  FreqVector a_vec = FreqVector::unit(1, 0, Rational(1, 4));
  SineProductForm f3 = simple_form(basis, {}, Complex(1, 0), 2.0 * M_PI * 0.25, a_vec);
  HExpansion up3 = sine_product_h_closed_form(f3, HalfPlane::Upper, 5.0);
  CHECK(up3.atoms().empty());
  CHECK(std::abs(up3.h0() - Complex(0.0, 2.0 * M_PI * 0.25)) < 1e-14);

  SineProductForm bad = simple_form(basis, {make_factor(basis, 0, Rational(1), 0.0, 1)});
  bad.factors[0].alpha = -1.0;
  CHECK_THROWS_AS(sine_product_h_closed_form(bad, HalfPlane::Upper, 5.0), BadFactor);
}

TEST_CASE("recursion matches the closed form on sin(pi z) sin(sqrt2 pi z + 0.3)") {
  auto b2 = basis_one_sqrt2();
  SineProductForm form = simple_form(
      b2, {make_factor(b2, 0, Rational(1), 0.0, 1), make_factor(b2, 1, Rational(1), 0.3, 1)});
  ExpSum Q = build_sine_product(form);

  for (HalfPlane hp : {HalfPlane::Upper, HalfPlane::Lower}) {
    HExpansion rec = h_expansion(Q, hp, 25.0);
    HExpansion cf = sine_product_h_closed_form(form, hp, 25.0);
    CHECK(expansion_diff(rec, cf) < 1e-9);
  }
}

TEST_CASE("additivity: expansion of a product is the sum of expansions") {
  auto b2 = basis_one_sqrt2();
  SineProductForm fa = simple_form(b2, {make_factor(b2, 0, Rational(1), 0.7, 1)});
  SineProductForm fb = simple_form(b2, {make_factor(b2, 1, Rational(1, 2), 0.2, 1)});
  ExpSum A = build_sine_product(fa), B = build_sine_product(fb);
  ExpSum AB = A.multiply(B);

  HExpansion hu = h_expansion(AB, HalfPlane::Upper, 20.0);
  HExpansion ha = h_expansion(A, HalfPlane::Upper, 20.0);
  HExpansion hb = h_expansion(B, HalfPlane::Upper, 20.0);

  CHECK(std::abs(hu.h0() - (ha.h0() + hb.h0())) < 1e-12);
  for (const auto& atom : hu.atoms()) {
    const HAtom* pa = ha.find(atom.gamma);
    const HAtom* pb = hb.find(atom.gamma);
    Complex expect = (pa ? pa->h : Complex(0, 0)) + (pb ? pb->h : Complex(0, 0));
    CHECK(std::abs(atom.h - expect) < 1e-9);
  }
}

TEST_CASE("h0 identity and Hermitian pairing on a sine product") {
  auto b2 = basis_one_sqrt2();
  SineProductForm form = simple_form(
      b2, {make_factor(b2, 0, Rational(3, 2), 0.4, 1), make_factor(b2, 1, Rational(1), 1.1, 2)});
  ExpSum Q = build_sine_product(form);
  auto ext = Q.spectrum_extremes();

  HExpansion up = h_expansion(Q, HalfPlane::Upper, 30.0);
  HExpansion lo = h_expansion(Q, HalfPlane::Lower, 30.0);
  CHECK(std::abs(up.h0() - Complex(0.0, 2.0 * M_PI * ext.min_value)) < 1e-12);
  CHECK(std::abs(lo.h0() - Complex(0.0, 2.0 * M_PI * ext.max_value)) < 1e-12);

  // real-rooted input: h_{-gamma} (lower) = conj(h_gamma) (upper)
  for (const auto& atom : up.atoms()) {
    const HAtom* mirror = lo.find(-atom.gamma);
    REQUIRE(mirror != nullptr);
    CHECK(std::abs(mirror->h - std::conj(atom.h)) < 1e-8);
  }
}

TEST_CASE("growth profile of sin(pi z)") {
  ExpSum sine = sin_pi_z();
  HExpansion up = h_expansion(sine, HalfPlane::Upper, 11.0);
  HExpansion lo = h_expansion(sine, HalfPlane::Lower, 11.0);

  GrowthReport single = growth_profile(up, lo, {10.5});
  CHECK(single.R_values[0] == doctest::Approx(40.0 * M_PI).epsilon(1e-12));

  HExpansion up50 = h_expansion(sine, HalfPlane::Upper, 50.0);
  HExpansion lo50 = h_expansion(sine, HalfPlane::Lower, 50.0);
  GrowthReport full = growth_profile(up50, lo50, default_radii(50.0));
  CHECK(full.slope_estimate == doctest::Approx(1.0).epsilon(0.05));
  CHECK(full.decades > 2.0);

  CHECK_THROWS_AS(growth_profile(up, lo, {12.0}), CutoffExceeded);

  // a single exponential: R identically zero, slope undefined
  ExpSum single_exp =
      ExpSum::make(basis_one(), {{FreqVector::unit(1, 0, Rational(1)), Complex(1, 0)}});
  HExpansion u2 = h_expansion(single_exp, HalfPlane::Upper, 11.0);
  HExpansion l2 = h_expansion(single_exp, HalfPlane::Lower, 11.0);
  GrowthReport flat = growth_profile(u2, l2, default_radii(11.0));
  CHECK(flat.R_values.back() == 0.0);
  CHECK(std::isnan(flat.slope_estimate));
  CHECK(meyer_verdict(flat).verdict == Verdict::Linear);
}

TEST_CASE("meyer verdict: sine products linear, narrow spans inconclusive") {
  FormSampler sampler(99);
  for (int i = 0; i < 3; ++i) {
    SineProductForm form = sampler.next();
    ExpSum Q = build_sine_product(form);
    double min_gen = 1e300;
    for (const auto& f : form.factors)
      min_gen = std::min(min_gen, form.basis->value_double(f.alpha_over_pi));
    double cutoff = 130.0 * min_gen;
    HExpansion up = h_expansion(Q, HalfPlane::Upper, cutoff);
    HExpansion lo = h_expansion(Q, HalfPlane::Lower, cutoff);
    MeyerReport rep = meyer_verdict(growth_profile(up, lo, default_radii(cutoff)));
    CHECK(rep.verdict == Verdict::Linear);
    CHECK(rep.slope_estimate == doctest::Approx(1.0).epsilon(0.1));
  }

  // one decade of radii cannot decide
  ExpSum sine = sin_pi_z();
  HExpansion up = h_expansion(sine, HalfPlane::Upper, 11.0);
  HExpansion lo = h_expansion(sine, HalfPlane::Lower, 11.0);
  std::vector<double> narrow;
  for (int i = 0; i <= 20; ++i) narrow.push_back(2.0 * std::pow(5.0, i / 20.0));
  MeyerReport rep = meyer_verdict(growth_profile(up, lo, narrow));
  CHECK(rep.verdict == Verdict::Inconclusive);
}

TEST_CASE("secular example is superlinear") {
  SecularSpec spec = make_secular_spec(
      3, {"1.0", builtin_constant_decimal("sqrt2"), builtin_constant_decimal("sqrt3")}, 42);
  SecularOptions opts;
  opts.certify = false;  // certification exercised elsewhere; keep this test fast
  ExpSum Q = secular_expsum(spec, opts);

  double cutoff = 12.0;
  HExpansion up = h_expansion(Q, HalfPlane::Upper, cutoff);
  HExpansion lo = h_expansion(Q, HalfPlane::Lower, cutoff);
  MeyerReport rep = meyer_verdict(growth_profile(up, lo, default_radii(cutoff)));
  CHECK(rep.verdict == Verdict::Superlinear);
  CHECK(rep.full_range_ratio_increase >= 5.0);
}

TEST_CASE("extended-precision recursion agrees with the double path") {
  auto b2 = basis_one_sqrt2();
  SineProductForm form = simple_form(
      b2, {make_factor(b2, 0, Rational(1), 0.5, 1), make_factor(b2, 1, Rational(1), 0.2, 1)});
  ExpSum Q = build_sine_product(form);

  HOptions hi;
  hi.precision_bits = 256;
  HExpansion a = h_expansion(Q, HalfPlane::Upper, 15.0);
  HExpansion b = h_expansion(Q, HalfPlane::Upper, 15.0, hi);
  CHECK(expansion_diff(a, b) < 1e-9);
}

TEST_CASE("runaway coefficient growth aborts with the offending frequency") {
  auto basis = basis_one();
  // tiny leading coefficient makes each h jump by a factor ~1e+120
  ExpSum Q = ExpSum::make(basis, {{FreqVector(1), Complex(1e-120, 0.0)},
                                  {FreqVector::unit(1, 0, Rational(1)), Complex(1.0, 0.0)}});
  CHECK_THROWS_AS(h_expansion(Q, HalfPlane::Upper, 10.0), OverflowAbort);
}

TEST_CASE("errors: empty sum and bad cutoff") {
  CHECK_THROWS_AS(h_expansion(ExpSum(basis_one()), HalfPlane::Upper, 5.0), EmptySum);
  CHECK_THROWS_AS(h_expansion(sin_pi_z(), HalfPlane::Upper, -1.0), BadCutoff);
}
