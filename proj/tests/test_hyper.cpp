#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "rama/ball.hpp"
#include "rama/exactnum.hpp"
#include "rama/hyper.hpp"
#include "test_util.hpp"

using rama::ComplexBall;
using rama::HyperParams;
using rama::Rational;
using rama::Side;
using rama::TowerElement;

namespace {

ComplexBall real_ball(double x, mpfr_prec_t prec) {
  Rational q(static_cast<long>(x * 1000000), 1000000);
  q.canonicalize();
  return ComplexBall::from_rational(q, prec);
}

}  // namespace

TEST_CASE("F_s(0) = 1") {
  for (int s : {2, 3, 4, 6}) {
    ComplexBall r = rama::f_s(HyperParams{s}, ComplexBall::from_long(0, 128),
                              std::nullopt, 128);
    CHECK(rama::contains(r, TowerElement::from_int(1)));
    CHECK(mpfr_cmp_d(r.radius(), 1e-30) < 0);
  }
}

TEST_CASE("multiplier ratio reproduces the printed 20 digits") {
  TowerElement alpha0 = TowerElement::from_rational(Rational(1, 2)) -
                        TowerElement::term(Rational(53, 1000), 89, false);
  TowerElement beta0 = TowerElement::from_int(1) - alpha0;
  ComplexBall m = rama::multiplier_numeric(HyperParams{3}, alpha0, beta0, 80);
  ComplexBall printed = ComplexBall::from_decimal(
      "0.20508654634905660459", "0.037653278425410375946", 96);
  printed.inflate_2exp(-64);  // the print is a 20-digit truncation
  CHECK(rama::overlaps(m, printed));
  CHECK(rama::certified_decimal_digits(m) >= 20);
  // The ratio's imaginary part is positive under upper-side continuation.
  CHECK(mpfr_sgn(m.im_mid()) > 0);
}

TEST_CASE("multiplier ratio degenerate and real-point cases") {
  TowerElement half = TowerElement::from_rational(Rational(1, 2));
  ComplexBall one = rama::multiplier_numeric(HyperParams{3}, half, half, 96);
  CHECK(rama::contains(one, TowerElement::from_int(1)));

  // Positive-class point of the degree-5 equation: F3 ratio = 1/sqrt(5).
  TowerElement alpha0 = half - TowerElement::term(Rational(11, 50), 5, false);
  TowerElement beta0 = TowerElement::from_int(1) - alpha0;
  ComplexBall m = rama::multiplier_numeric(HyperParams{3}, alpha0, beta0, 96);
  TowerElement inv_sqrt5 = TowerElement::term(Rational(1, 5), 5, false);
  CHECK(rama::contains(m, inv_sqrt5));
}

TEST_CASE("the two evaluation regimes agree where both converge") {
  // f_s switches to the connection formula past |alpha| = 0.7; the direct
  // Gauss series is still certified below 0.95, so (0.71, 0.9) exercises
  // both code paths on the same input.
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> unif(0.71, 0.90);
  HyperParams p{3};
  for (int t = 0; t < 50; ++t) {
    ComplexBall alpha = real_ball(unif(rng), 256);
    ComplexBall direct =
        rama::gauss_2f1(p.a(), p.b(), Rational(1), alpha, 256);
    ComplexBall connected = rama::f_s(p, alpha, std::nullopt, 256);
    REQUIRE(rama::overlaps(direct, connected));
    REQUIRE(rama::certified_decimal_digits(connected) > 40);
  }
}

TEST_CASE("s = 2 matches the arithmetic-geometric mean oracle") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> unif(0.005, 0.945);
  HyperParams p{2};
  for (int t = 0; t < 100; ++t) {
    ComplexBall alpha = real_ball(unif(rng), 192);
    ComplexBall f = rama::f_s(p, alpha, std::nullopt, 192);
    ComplexBall one = ComplexBall::from_long(1, 192);
    ComplexBall w = rama::sqrt(sub(one, alpha));
    ComplexBall oracle = rama::div(one, rama::agm(one, w));
    REQUIRE(rama::overlaps(f, oracle));
  }
}

TEST_CASE("centered differences match the contiguous derivative") {
  // d/dz 2F1(a,b;c;z) = (a b / c) 2F1(a+1, b+1; c+1; z).
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> unif(0.05, 0.6);
  const long hbits = 30;
  Rational h(1, 1);
  h /= mpz_class(1) << hbits;
  for (int s : {2, 3, 4, 6}) {
    HyperParams p{s};
    for (int t = 0; t < 3; ++t) {
      ComplexBall z = real_ball(unif(rng), 320);
      ComplexBall zp = add(z, ComplexBall::from_rational(h, 320));
      ComplexBall zm = sub(z, ComplexBall::from_rational(h, 320));
      ComplexBall fd = rama::div(
          sub(rama::gauss_2f1(p.a(), p.b(), Rational(1), zp, 320),
              rama::gauss_2f1(p.a(), p.b(), Rational(1), zm, 320)),
          ComplexBall::from_rational(h * 2, 320));
      ComplexBall deriv = mul_rational(
          rama::gauss_2f1(p.a() + 1, p.b() + 1, Rational(2), z, 320),
          p.a() * p.b());
      // |fd - deriv| ~ h^2 |f'''|: bounded far below the values themselves.
      ComplexBall diff = sub(fd, deriv);
      rama::Real err = diff.abs_upper();
      REQUIRE(mpfr_cmp_d(err.get(), 1e-14) < 0);
    }
  }
}

TEST_CASE("branch selection above the cut") {
  // For real alpha slightly above 1, upper-side continuation makes
  // Im(F_3(alpha)) negative (the log term contributes -i pi).
  Rational beta("1000001/1000000");
  ComplexBall b = ComplexBall::from_rational(beta, 160);
  ComplexBall up = rama::f_s(HyperParams{3}, b, Side::upper, 160);
  CHECK(mpfr_sgn(up.im_mid()) < 0);
  ComplexBall down = rama::f_s(HyperParams{3}, b, Side::lower, 160);
  CHECK(mpfr_sgn(down.im_mid()) > 0);
  // The two continuations agree in the real part.
  CHECK(mpfr_cmp_d(sub(up, conj(down)).abs_upper().get(), 1e-30) < 0);
}

TEST_CASE("evaluation outside both discs is rejected") {
  ComplexBall z(96);
  mpfr_set_d(z.re_mid_mut(), 0.5, MPFR_RNDN);
  mpfr_set_d(z.im_mid_mut(), 0.9, MPFR_RNDN);
  CHECK_THROWS_AS(rama::f_s(HyperParams{3}, z, std::nullopt, 96),
                  rama::UnsupportedRegion);
}
