#pragma once

#include <string>
#include <vector>

#include "rama/exactnum.hpp"

namespace rama {

enum class SeriesClass { positive, alternating };

std::string to_string(SeriesClass c);
SeriesClass series_class_from_string(const std::string& s);

/// A singular point of a modular equation with beta = 1 - alpha.
///
/// u0 itself can require a nested radical outside the quadratic tower class
/// (a 16th root of unity direction) even though u0^2 never does, because
/// every equation in the registry has only even-total-degree monomials. When
/// that happens u_in_tower is false, u0 and v0 are unset (zero), and the
/// point is fully determined by u0sq and zeta.
struct SingularPoint {
  TowerElement u0;
  TowerElement v0;
  TowerElement zeta;   // v0 = zeta * u0, zeta^k = 1
  TowerElement u0sq;   // u0^2, always representable
  bool u_in_tower = true;
  TowerElement alpha0;
  TowerElement beta0;
};

/// Exact intermediates of the derivation, kept so verification never has
/// to repeat the implicit differentiation.
struct DerivationTrace {
  // When wrt_u is true, all derivatives are with respect to u and v1, v2 are
  // dv/du, d2v/du2 at u0. When the point's u0 is not tower-representable the
  // pipeline differentiates with respect to t = u^2 instead, and v1, v2 hold
  // dx/dt, d2x/dt2 for x = v/u at (t0, zeta). Every certified quantity
  // (m0^2, m'_0/alpha'_0, z, a, b) is invariant under this change of
  // variable, since only derivative ratios enter.
  bool wrt_u = true;
  TowerElement v1, v2;
  TowerElement alpha1, beta1;   // first derivatives of alpha, beta
  TowerElement alpha2, beta2;   // second derivatives
  TowerElement m0;              // multiplier
  TowerElement m_ratio;         // m'_0 / alpha'_0
  long d = 0;                   // equation degree
  int ell = 0;                  // level
  int s = 0;
};

/// Sum_{n>=0} (1/2)_n (1/s)_n (1-1/s)_n / (1)_n^3 (A n + B) sign^n / M^n
///   = C sqrt(ell) / pi   (level_radical true)
///   = C / pi             (level_radical false).
/// Whether sqrt(ell) survives on the right-hand side depends on whether
/// b = 2(1-2 alpha0) sqrt(...) comes out as a rational multiple of
/// sqrt(ell) or as a plain rational; both occur among the registry series.
/// M is the reciprocal of |z| and need not be an integer (e.g. z = 4/125
/// gives M = 125/4); it is a perfect power where one exists.
struct RationalForm {
  mpz_class A;
  mpz_class B;
  int sign = 1;  // +1 or -1
  Rational M;
  Rational C;
  bool level_radical = true;

  Rational z() const { return Rational(sign) / M; }
};

struct SeriesCertificate {
  std::string equation_name;
  int s = 0;
  int ell = 0;
  long d = 0;
  SeriesClass klass = SeriesClass::alternating;
  TowerElement z, a, b;  // Sum (a + b n) z^n = 1/pi
  RationalForm rational_form;
  DerivationTrace trace;
  SingularPoint point;
  std::string equation_source;  // verbatim equation file text
};

struct VerificationReport {
  struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
  };
  std::vector<Check> checks;
  bool all_pass() const;
};

/// Human-readable identity, e.g.
///   "sum (14151 n + 827) (-1)^n / 500^(2 n) = 1500 sqrt(3)/pi".
std::string display_identity(const SeriesCertificate& cert);

}  // namespace rama
