#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "rama/ball.hpp"
#include "rama/exactnum.hpp"
#include "rama/hyper.hpp"
#include "test_util.hpp"

using rama::ComplexBall;
using rama::Rational;
using rama::Side;
using rama::TowerElement;

TEST_CASE("sqrt of -1 approaching from above is i") {
  ComplexBall minus_one = ComplexBall::from_long(-1, 128);
  ComplexBall r = rama::sqrt(minus_one, Side::upper);
  ComplexBall i_ball = TowerElement::imaginary_unit().to_ball(128);
  CHECK(rama::overlaps(r, i_ball));
  CHECK(mpfr_cmp_d(r.radius(), 1e-30) < 0);
}

TEST_CASE("division radius stays near working precision") {
  ComplexBall third = rama::div(ComplexBall::from_long(1, 128),
                                ComplexBall::from_long(3, 128));
  Rational one_third(1, 3);
  CHECK(rama::contains(third, TowerElement::from_rational(one_third)));
  mpfr_t bound;
  mpfr_init2(bound, 32);
  mpfr_set_ui_2exp(bound, 1, -120, MPFR_RNDN);
  CHECK(mpfr_cmp(third.radius(), bound) < 0);
  mpfr_clear(bound);
}

TEST_CASE("log of a small negative real from above has +pi imaginary part") {
  // 1 - beta0 = -53 sqrt(89)/1000 + 1/2 - ... is about -1.06e-6.
  TowerElement one_minus_beta0 =
      TowerElement::from_rational(Rational(1, 2)) -
      TowerElement::term(Rational(53, 1000), 89, false);
  ComplexBall x = one_minus_beta0.to_ball(160);
  CHECK(rama::certified_sign_real(x) == -1);
  ComplexBall lx = rama::log(x, Side::upper);
  CHECK(mpfr_cmp_d(lx.im_mid(), 3.14159) > 0);
  CHECK(mpfr_cmp_d(lx.im_mid(), 3.1416) < 0);
}

TEST_CASE("agm basics and defining recurrence") {
  ComplexBall one = ComplexBall::from_long(1, 160);
  ComplexBall r = rama::agm(one, one);
  CHECK(rama::contains(r, TowerElement::from_int(1)));

  // 1/agm(1, sqrt(1/2)) matches the direct hypergeometric series.
  ComplexBall half = ComplexBall::from_rational(Rational(1, 2), 160);
  ComplexBall inv_agm = rama::div(one, rama::agm(one, rama::sqrt(half)));
  rama::HyperParams p2{2};
  ComplexBall series = rama::f_s(p2, half, std::nullopt, 160);
  CHECK(rama::overlaps(inv_agm, series));
  // Spot value 1.18034059901...
  CHECK(mpfr_cmp_d(inv_agm.re_mid(), 1.18034059) > 0);
  CHECK(mpfr_cmp_d(inv_agm.re_mid(), 1.18034060) < 0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.2, 2.0);
  for (int t = 0; t < 50; ++t) {
    Rational qa(static_cast<long>(unif(rng) * 1000), 1000);
    Rational qb(static_cast<long>(unif(rng) * 1000), 1000);
    qa.canonicalize();
    qb.canonicalize();
    ComplexBall a = ComplexBall::from_rational(qa, 128);
    ComplexBall b = ComplexBall::from_rational(qb, 128);
    ComplexBall lhs = rama::agm(a, b);
    ComplexBall mid = mul_rational(add(a, b), Rational(1, 2));
    ComplexBall geo = rama::sqrt(mul(a, b));
    ComplexBall rhs = rama::agm(mid, geo);
    REQUIRE(rama::overlaps(lhs, rhs));
  }
}

TEST_CASE("contains relates balls to exact elements") {
  TowerElement m0 = TowerElement::term(Rational(1, 46), 89, false) +
                    TowerElement::term(Rational(1, 46), 3, true);
  ComplexBall printed = ComplexBall::from_decimal(
      "0.20508654634905660459", "0.037653278425410375946", 80);
  printed.inflate_2exp(-64);  // 20-digit truncation slack
  CHECK(rama::contains(printed, m0));

  ComplexBall half = ComplexBall::from_rational(Rational(1, 2), 96);
  CHECK(rama::contains(half, TowerElement::from_rational(Rational(1, 2))));

  ComplexBall tight = ComplexBall::from_rational(Rational(1, 2), 256);
  TowerElement off = TowerElement::from_rational(Rational(1, 2)) +
                     TowerElement::from_rational(Rational(1, mpz_class("100000000000000000000")));
  CHECK_FALSE(rama::contains(tight, off));
}

TEST_CASE("containment monotonicity on random elements") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 10000; ++t) {
    TowerElement x = testutil::random_element(rng, 2);
    ComplexBall lo = x.to_ball(80);
    ComplexBall hi = x.to_ball(160);
    REQUIRE(rama::contains_ball(lo, hi));
  }
}

TEST_CASE("dyadic arithmetic stays within an ulp per operation") {
  // Radius-0 dyadic inputs through +, *, -: radius stays at rounding scale.
  ComplexBall a = ComplexBall::from_rational(Rational(3, 8), 128);
  ComplexBall b = ComplexBall::from_rational(Rational(5, 4), 128);
  CHECK(a.is_exact());
  ComplexBall c = mul(add(a, b), sub(b, a));
  mpfr_t bound;
  mpfr_init2(bound, 32);
  mpfr_set_ui_2exp(bound, 8, -126, MPFR_RNDN);
  CHECK(mpfr_cmp(c.radius(), bound) < 0);
  mpfr_clear(bound);
}
