#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "rama/exactnum.hpp"
#include "test_util.hpp"

using rama::ComplexBall;
using rama::Rational;
using rama::TowerElement;
using testutil::random_element;
using testutil::random_nonzero_element;

namespace {

TowerElement q(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return TowerElement::from_rational(r);
}

TowerElement rad(long n) { return TowerElement::radical(n); }

const TowerElement i_unit = TowerElement::imaginary_unit();

// alpha0 = 1/2 - 53 sqrt(89)/1000 of the degree-23 derivation.
TowerElement alpha0() { return q(1, 2) - q(53, 1000) * rad(89); }

// u0 = (sqrt15 + sqrt5)/20 + (sqrt15 - sqrt5)/20 i.
TowerElement u0() {
  return (rad(15) + rad(5)) * q(1, 20) + (rad(15) - rad(5)) * q(1, 20) * i_unit;
}

// m0^2 = 43/1058 + sqrt(3) sqrt(89)/1058 i.
TowerElement m0_squared() {
  return q(43, 1058) + rad(3) * rad(89) * q(1, 1058) * i_unit;
}

TowerElement m0() { return rad(89) * q(1, 46) + rad(3) * q(1, 46) * i_unit; }

}  // namespace

TEST_CASE("addition builds two-term elements and respects identities") {
  TowerElement a = q(1, 2) + (-q(53, 1000) * rad(89));
  CHECK(a == alpha0());
  CHECK(a.term_count() == 2);

  std::mt19937_64 rng(7);
  TowerElement x = random_element(rng);
  CHECK(x + TowerElement() == x);

  TowerElement zeta = rad(3) * q(1, 2) - q(1, 2) * i_unit;
  CHECK(zeta + zeta.conjugate() == rad(3));
}

TEST_CASE("multiplication folds radicand squares") {
  CHECK(rad(3) * rad(3) == TowerElement::from_int(3));
  // (1/2 - 53 sqrt89/1000)(1/2 + 53 sqrt89/1000) = alpha0 beta0 = -10^-6.
  TowerElement beta0 = TowerElement::from_int(1) - alpha0();
  CHECK(alpha0() * beta0 == q(-1, 1000000));
  // u0^12 = alpha0 beta0 as well.
  CHECK(u0().pow(12) == q(-1, 1000000));
}

TEST_CASE("division by conjugate rationalization") {
  TowerElement num = -q(294573, 1) * rad(3) + q(82573, 1) * i_unit;
  TowerElement v1 = num / TowerElement::from_int(516854);
  CHECK(v1.coefficient(3, false) == Rational(-294573, 516854));
  CHECK(v1.coefficient(1, true) == Rational(82573, 516854));

  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    TowerElement x = random_nonzero_element(rng);
    CHECK(x / x == TowerElement::from_int(1));
  }

  TowerElement inv = TowerElement::from_int(1) / (rad(3) + i_unit);
  CHECK(inv == rad(3) * q(1, 4) - q(1, 4) * i_unit);
}

TEST_CASE("sqrt with branch hints") {
  ComplexBall hint = m0().to_ball(96);
  CHECK(rama::sqrt(m0_squared(), hint) == m0());
  CHECK(rama::sqrt(q(9, 4), q(3, 2).to_ball(64)) == q(3, 2));
  TowerElement r5 = rama::sqrt(q(1, 5), rad(5).to_ball(64));
  CHECK(r5 == rad(5) * q(1, 5));
}

TEST_CASE("to_ball gives certified enclosures") {
  ComplexBall m = m0().to_ball(70);
  ComplexBall printed = ComplexBall::from_decimal(
      "0.20508654634905660459", "0.037653278425410375946", 80);
  // The printed value is a 20-digit truncation: allow for its own error.
  printed.inflate_2exp(-64);  // 5e-20
  CHECK(rama::overlaps(m, printed));

  ComplexBall half = q(1, 2).to_ball(64);
  CHECK(mpfr_cmp_d(half.radius(), 1e-18) < 0);

  ComplexBall a = alpha0().to_ball(128);
  // alpha0 is about -1.06e-6.
  CHECK(mpfr_cmp_d(a.re_mid(), -2e-6) > 0);
  CHECK(mpfr_cmp_d(a.re_mid(), -1e-7) < 0);
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(2026);
  for (int t = 0; t < 10000; ++t) {
    TowerElement x = random_element(rng, 2);
    TowerElement y = random_element(rng, 2);
    TowerElement z = random_element(rng, 2);
    REQUIRE((x + y) + z == x + (y + z));
    REQUIRE((x * y) * z == x * (y * z));
    REQUIRE(x * (y + z) == x * y + x * z);
    REQUIRE((x + (-x)).is_zero());
  }
  // Multiplicative inverses (division is the slow path; fewer cases).
  for (int t = 0; t < 300; ++t) {
    TowerElement x = random_nonzero_element(rng, 3);
    REQUIRE(x * x.inv() == TowerElement::from_int(1));
  }
}

TEST_CASE("sqrt round-trip on random squares") {
  // Compact elements (two-generator towers with i, single-digit coefficient
  // heights) keep 10^4 denesting searches fast while still covering the
  // radicand combinations the derivations use.
  static const long kRads[] = {1, 2, 3, 5, 6, 10, 15};
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> pick(0, 6), coin(0, 1);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
  for (int t = 0; t < 10000; ++t) {
    TowerElement y;
    for (int term = 0; term < 3; ++term) {
      if (coin(rng) && term) continue;
      Rational c(num(rng), den(rng));
      c.canonicalize();
      y += TowerElement::term(c, kRads[pick(rng)], coin(rng) == 1);
    }
    if (y.is_zero()) y = TowerElement::from_int(1);
    TowerElement x = y * y;
    TowerElement r = rama::sqrt(x, y.to_ball(128));
    REQUIRE(r * r == x);
    REQUIRE((r == y || r == -y));
  }
}

TEST_CASE("to_ball soundness at doubled precision") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 2000; ++t) {
    TowerElement x = random_element(rng, 3);
    ComplexBall lo = x.to_ball(96);
    ComplexBall hi = x.to_ball(192);
    REQUIRE(rama::contains_ball(lo, hi));
  }
}

TEST_CASE("text form round-trips bit-exactly") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    TowerElement x = random_element(rng, 3);
    TowerElement back = TowerElement::parse(x.to_string());
    REQUIRE(back == x);
    REQUIRE(back.to_string() == x.to_string());
  }
  CHECK(TowerElement().to_string() == "0");
  CHECK(TowerElement::parse("0").is_zero());
}
