#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <string>

#include "rama/errors.hpp"

namespace rama {

/// Which side of the principal branch cut an operation approaches from.
/// upper = limit from the upper half-plane of the operand.
enum class Side { upper, lower };

/// Thin RAII wrapper around mpfr_t.
class Real {
 public:
  explicit Real(mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

 private:
  mpfr_t v_;
};

/// Complex ball: arbitrary-precision midpoint plus one absolute error radius
/// bounding the distance to the exact value (disc representation).
/// Every operation returns a ball certified to contain the exact image of
/// any members of its input balls.
class ComplexBall {
 public:
  static constexpr mpfr_prec_t kRadiusPrec = 32;

  explicit ComplexBall(mpfr_prec_t prec = 64);

  static ComplexBall from_long(long re, mpfr_prec_t prec);
  static ComplexBall from_rational(const mpq_class& re, mpfr_prec_t prec);
  static ComplexBall from_rational(const mpq_class& re, const mpq_class& im,
                                   mpfr_prec_t prec);
  /// Decimal strings are taken as exact values; the ball accounts only for
  /// the binary conversion rounding.
  static ComplexBall from_decimal(const std::string& re, const std::string& im,
                                  mpfr_prec_t prec);
  static ComplexBall pi(mpfr_prec_t prec);
  static ComplexBall sqrt_positive_integer(const mpz_class& n,
                                           mpfr_prec_t prec);
  static ComplexBall log_positive_integer(const mpz_class& n,
                                          mpfr_prec_t prec);

  mpfr_prec_t prec() const { return mpfr_get_prec(re_.get()); }
  mpfr_srcptr re_mid() const { return re_.get(); }
  mpfr_srcptr im_mid() const { return im_.get(); }
  mpfr_srcptr radius() const { return rad_.get(); }
  mpfr_ptr re_mid_mut() { return re_.get(); }
  mpfr_ptr im_mid_mut() { return im_.get(); }
  mpfr_ptr radius_mut() { return rad_.get(); }

  bool is_exact() const { return mpfr_zero_p(rad_.get()); }
  bool mid_is_real() const { return mpfr_zero_p(im_.get()); }
  void clear_radius() { mpfr_set_zero(rad_.get(), 1); }
  /// Enlarge the radius by a nonnegative amount (rounded up).
  void inflate(mpfr_srcptr extra);
  void inflate_2exp(long e);  // radius += 2^e

  /// Upper / lower bounds on |midpoint| at radius precision.
  Real abs_mid_upper() const;
  Real abs_mid_lower() const;
  /// Upper bound on |z| over the whole ball.
  Real abs_upper() const;

 private:
  Real re_, im_, rad_;
};

ComplexBall add(const ComplexBall& a, const ComplexBall& b);
ComplexBall sub(const ComplexBall& a, const ComplexBall& b);
ComplexBall neg(const ComplexBall& a);
ComplexBall conj(const ComplexBall& a);
ComplexBall mul(const ComplexBall& a, const ComplexBall& b);
ComplexBall div(const ComplexBall& a, const ComplexBall& b);
ComplexBall mul_rational(const ComplexBall& a, const mpq_class& q);
ComplexBall mul_i(const ComplexBall& a);  // exact rotation by i
ComplexBall sqrt(const ComplexBall& a, std::optional<Side> side = {});
ComplexBall log(const ComplexBall& a, std::optional<Side> side = {});
ComplexBall powi(const ComplexBall& a, long n);

/// Arithmetic-geometric mean; both operands must lie in the right half-plane.
/// Radius bound is oracle-grade (based on the bracketing |a_n - b_n|).
ComplexBall agm(const ComplexBall& a, const ComplexBall& b);

/// Distance between midpoints bounded above; discs intersect iff it does not
/// exceed the summed radii.
bool overlaps(const ComplexBall& a, const ComplexBall& b);
/// True when every point of inner certifiably lies in outer.
bool contains_ball(const ComplexBall& outer, const ComplexBall& inner);
bool contains_point(const ComplexBall& b, mpfr_srcptr re, mpfr_srcptr im);

/// Certified sign of a real ball: +1 / -1 when the ball excludes zero,
/// 0 when it cannot be decided at this radius.
int certified_sign_real(const ComplexBall& b);

/// Number of certified significant decimal digits of the midpoint.
long certified_decimal_digits(const ComplexBall& b);
/// Renders only digits guaranteed by the radius; verbose appends the
/// certified digit count.
std::string to_decimal(const ComplexBall& b, bool verbose = false);

}  // namespace rama
