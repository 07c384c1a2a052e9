#pragma once

#include <optional>

#include "rama/ball.hpp"
#include "rama/exactnum.hpp"

namespace rama {

/// Parameters of the family F_s(x) = 2F1(1/s, 1-1/s; 1; x).
struct HyperParams {
  int s;  // one of {6,4,3,2}

  Rational a() const { return Rational(1, s); }
  Rational b() const { return Rational(s - 1, s); }
  int level() const;  // l = 4 sin^2(pi/s)
};

/// Gauss series for 2F1(a,b;c;z), valid for |z| <= 0.7 (certified tail).
ComplexBall gauss_2f1(const Rational& a, const Rational& b, const Rational& c,
                      const ComplexBall& z, mpfr_prec_t precision_bits);

/// Certified F_s(alpha). Two regimes: the Gauss series around 0 and the
/// logarithmic connection formula around 1 (c = a+b case). `side` selects
/// the continuation branch when alpha crosses the cut [1, inf); the log of
/// 1-alpha is taken as the limit from that side of its own cut, so
/// side = upper reproduces a multiplier with positive imaginary part.
ComplexBall f_s(const HyperParams& p, const ComplexBall& alpha,
                std::optional<Side> side, mpfr_prec_t precision_bits);

/// F_s(alpha0)/F_s(beta0) with beta0 = 1 - alpha0 checked exactly;
/// upper-side continuation by default when beta0 > 1.
ComplexBall multiplier_numeric(const HyperParams& p, const TowerElement& alpha0,
                               const TowerElement& beta0,
                               mpfr_prec_t precision_bits,
                               std::optional<Side> side = Side::upper);

}  // namespace rama
