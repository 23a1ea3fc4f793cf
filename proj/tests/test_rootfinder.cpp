#include <doctest.h>

#include <cmath>
#include <random>

#include "sinefactor/errors.hpp"
#include "sinefactor/generate.hpp"
#include "sinefactor/rootfind.hpp"
#include "test_helpers.hpp"

using namespace sinefactor;
using namespace sf_test;

TEST_CASE("argument-principle counts on rectangles") {
  ExpSum sine = sin_pi_z();
  CHECK(count_zeros_rect(sine, {-0.4, 0.4, -1.0, 1.0}) == 1);
  CHECK(count_zeros_rect(sine, {0.6, 3.4, -1.0, 1.0}) == 3);

  ExpSum sq = sine.multiply(sine);
  CHECK(count_zeros_rect(sq, {-0.4, 0.4, -1.0, 1.0}) == 2);

  // a contour through a zero is rejected
  CHECK_THROWS_AS(count_zeros_rect(sine, {-1.0, 1.0, -0.5, 0.5}), ContourNearZero);

  // constants have no zeros
  ExpSum c = ExpSum::make(basis_one(), {{FreqVector(1), Complex(3, 1)}});
  CHECK(count_zeros_rect(c, {-5.0, 5.0, -1.0, 1.0}) == 0);
}

TEST_CASE("counting additivity over abutting rectangles") {
  auto b2 = basis_one_sqrt2();
  SineProductForm form = simple_form(
      b2, {make_factor(b2, 0, Rational(1), 0.0, 1), make_factor(b2, 1, Rational(1), 0.5, 1)});
  ExpSum Q = build_sine_product(form);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int round = 0; round < 6; ++round) {
    double a = -6.0 + 12.0 * u(rng);
    double width = 1.0 + 3.0 * u(rng);
    double split = pick_contour_abscissa(Q, a + width * 0.5, width * 0.2, 1.0);
    double lo = pick_contour_abscissa(Q, a, 0.2, 1.0);
    double hi = pick_contour_abscissa(Q, a + width, 0.2, 1.0);
    if (!(lo < split && split < hi)) continue;
    int whole = count_zeros_rect(Q, {lo, hi, -1.0, 1.0});
    int left = count_zeros_rect(Q, {lo, split, -1.0, 1.0});
    int right = count_zeros_rect(Q, {split, hi, -1.0, 1.0});
    CHECK(whole == left + right);
  }
}

TEST_CASE("locate zeros of sin(pi z) on [-5.5, 5.5]") {
  ExpSum sine = sin_pi_z();
  ZeroSet zs = locate_real_zeros(sine, -5.5, 5.5, 1.0);
  CHECK(zs.certified());
  REQUIRE(zs.zeros().size() == 11);
  for (int k = 0; k < 11; ++k) {
    CHECK(std::abs(zs.zeros()[k].location - (k - 5)) < 1e-10);
    CHECK(zs.zeros()[k].multiplicity == 1);
  }
}

TEST_CASE("zeros of sin(pi z) sin(pi z + pi/3) are two interleaved progressions") {
  auto basis = basis_one();
  SineProductForm form = simple_form(
      basis,
      {make_factor(basis, 0, Rational(1), 0.0, 1), make_factor(basis, 0, Rational(1), M_PI / 3, 1)});
  ExpSum Q = build_sine_product(form);

  ZeroSet zs = locate_real_zeros(Q, -0.1, 3.1, 1.0);
  CHECK(zs.certified());
  // union of Z and Z - 1/3 restricted to the window
  std::vector<double> expect{0.0, 2.0 / 3.0, 1.0, 5.0 / 3.0, 2.0, 8.0 / 3.0, 3.0};
  REQUIRE(zs.zeros().size() == expect.size());
  for (size_t i = 0; i < expect.size(); ++i)
    CHECK(std::abs(zs.zeros()[i].location - expect[i]) < 1e-10);
}

TEST_CASE("double zeros carry multiplicity 2") {
  auto basis = basis_one();
  SineProductForm form = simple_form(basis, {make_factor(basis, 0, Rational(1), 0.3, 2)});
  ExpSum Q = build_sine_product(form);

  ZeroSet zs = locate_real_zeros(Q, -3.0, 3.0, 1.0);
  CHECK(zs.certified());
  REQUIRE(!zs.zeros().empty());
  for (const auto& z : zs.zeros()) {
    CHECK(z.multiplicity == 2);
    // zeros of sin(pi z + 0.3) sit at n - 0.3/pi
    double frac = std::fmod(z.location + 0.3 / M_PI, 1.0);
    if (frac > 0.5) frac -= 1.0;
    if (frac < -0.5) frac += 1.0;
    CHECK(std::abs(frac) < 1e-8);
  }
}

TEST_CASE("certification: lattice, off-axis shift, and unit-strip bound") {
  ExpSum sine = sin_pi_z();
  CertifyReport rep = certify_real_rooted(sine, -10.25, 10.25, 1.0);
  CHECK(rep.certified);
  CHECK(rep.rect_count == 21);
  CHECK(rep.real_count == 21);
  CHECK(rep.unit_strip_max == 2);  // endpoints of a closed unit interval

  // sin(pi z) + 0.4i has zeros at Im z ~ +-0.1226, none real
  ExpSum shifted = sine.plus(ExpSum::make(basis_one(), {{FreqVector(1), Complex(0.0, 0.4)}}));
  CertifyReport bad = certify_real_rooted(shifted, -4.6, 4.6, 1.0);
  CHECK(!bad.certified);
  CHECK(bad.rect_count > bad.real_count);
  CHECK(bad.real_count == 0);
}

TEST_CASE("translation covariance for a periodic input") {
  // sin(pi z) sin(2 pi z + 0.4) has period 1 in its zero pattern... period 2
  auto basis = basis_one();
  SineProductForm form = simple_form(
      basis,
      {make_factor(basis, 0, Rational(1), 0.0, 1), make_factor(basis, 0, Rational(2), 0.4, 1)});
  ExpSum Q = build_sine_product(form);

  ZeroSet a = locate_real_zeros(Q, 0.1, 1.1, 1.0);
  ZeroSet b = locate_real_zeros(Q, 1.1, 2.1, 1.0);
  REQUIRE(a.zeros().size() == b.zeros().size());
  for (size_t i = 0; i < a.zeros().size(); ++i)
    CHECK(std::abs(a.zeros()[i].location + 1.0 - b.zeros()[i].location) < 1e-10);
}

TEST_CASE("zero density approaches the spectrum width") {
  auto b2 = basis_one_sqrt2();
  SineProductForm form = simple_form(
      b2, {make_factor(b2, 0, Rational(1), 0.2, 1), make_factor(b2, 1, Rational(1), 0.0, 1)});
  ExpSum Q = build_sine_product(form);
  auto ext = Q.spectrum_extremes();
  double width = ext.max_value - ext.min_value;

  const double L = 40.0;
  double lo = pick_contour_abscissa(Q, -L, 0.2, 1.0);
  double hi = pick_contour_abscissa(Q, L, 0.2, 1.0);
  ZeroSet zs = locate_real_zeros(Q, lo, hi, 1.0);
  CHECK(zs.certified());
  double density = zs.total_multiplicity() / (hi - lo);
  CHECK(std::abs(density - width) < 2.0 / L);

  // almost periodic inputs have a uniform per-unit-strip bound
  CHECK(zs.max_unit_strip_count() <= static_cast<int>(std::ceil(width)) + 1);
}

TEST_CASE("window restriction keeps ordering and certification") {
  ExpSum sine = sin_pi_z();
  ZeroSet zs = locate_real_zeros(sine, -5.5, 5.5, 1.0);
  ZeroSet sub = zs.restricted(-2.2, 2.2);
  CHECK(sub.certified());
  CHECK(sub.zeros().size() == 5);
  CHECK(sub.x_lo() == -2.2);
  CHECK(sub.total_multiplicity() == 5);
}

TEST_CASE("eta retry and window guards") {
  ExpSum sine = sin_pi_z();
  CHECK_THROWS_AS(locate_real_zeros(sine, 2.0, 1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(locate_real_zeros(ExpSum(basis_one()), 0.0, 1.0, 1.0), EmptySum);

  // vertical edges through zeros are not retried away; they are reported
  CHECK_THROWS_AS(count_zeros_rect(sine, {0.0, 2.5, -1.0, 1.0}), ContourNearZero);
}
