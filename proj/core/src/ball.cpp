#include "rama/ball.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace rama {

namespace {

constexpr mpfr_prec_t RP = ComplexBall::kRadiusPrec;

// One ulp of x at the given precision; zero for zero x.
void set_ulp(mpfr_ptr out, mpfr_srcptr x, mpfr_prec_t prec) {
  if (mpfr_zero_p(x)) {
    mpfr_set_zero(out, 1);
    return;
  }
  mpfr_set_ui_2exp(out, 1, mpfr_get_exp(x) - prec, MPFR_RNDU);
}

// radius += k * (ulp(re) + ulp(im)); covers k rounding steps per component.
void add_component_ulps(ComplexBall& z, unsigned k) {
  Real u(RP), t(RP);
  set_ulp(u.get(), z.re_mid(), z.prec());
  set_ulp(t.get(), z.im_mid(), z.prec());
  mpfr_add(u.get(), u.get(), t.get(), MPFR_RNDU);
  mpfr_mul_ui(u.get(), u.get(), k, MPFR_RNDU);
  mpfr_add(z.radius_mut(), z.radius(), u.get(), MPFR_RNDU);
}

// radius += k * ulp(x) for an intermediate quantity x (handles cancellation
// in sums of rounded products, where the result ulp alone is too small).
void add_value_ulps(ComplexBall& z, mpfr_srcptr x, unsigned k) {
  Real u(RP);
  set_ulp(u.get(), x, z.prec());
  mpfr_mul_ui(u.get(), u.get(), k, MPFR_RNDU);
  mpfr_add(z.radius_mut(), z.radius(), u.get(), MPFR_RNDU);
}

void rad_accum(mpfr_ptr rad, mpfr_srcptr x) { mpfr_add(rad, rad, x, MPFR_RNDU); }

bool ball_touches_origin(const ComplexBall& a) {
  Real lo = a.abs_mid_lower();
  return mpfr_cmp(lo.get(), a.radius()) <= 0;
}

// Conservative test: does the disc possibly intersect the negative real axis
// (the principal branch cut), origin excluded?
bool straddles_cut(const ComplexBall& a) {
  Real t(RP);
  mpfr_abs(t.get(), a.im_mid(), MPFR_RNDD);
  if (mpfr_cmp(t.get(), a.radius()) > 0) return false;
  // im interval contains 0; cut reachable when re can be negative
  mpfr_sub(t.get(), a.re_mid(), a.radius(), MPFR_RNDD);
  if (mpfr_sgn(t.get()) >= 0) return false;
  return true;
}

// z *= i (exact rotation)
void rotate_i(ComplexBall& z) {
  Real t(z.prec());
  mpfr_set(t.get(), z.re_mid(), MPFR_RNDN);
  mpfr_neg(z.re_mid_mut(), z.im_mid(), MPFR_RNDN);
  mpfr_set(z.im_mid_mut(), t.get(), MPFR_RNDN);
}

void rotate_minus_i(ComplexBall& z) {
  rotate_i(z);
  mpfr_neg(z.re_mid_mut(), z.re_mid(), MPFR_RNDN);
  mpfr_neg(z.im_mid_mut(), z.im_mid(), MPFR_RNDN);
}

}  // namespace

ComplexBall::ComplexBall(mpfr_prec_t prec) : re_(prec), im_(prec), rad_(RP) {}

void ComplexBall::inflate(mpfr_srcptr extra) {
  mpfr_add(rad_.get(), rad_.get(), extra, MPFR_RNDU);
}

void ComplexBall::inflate_2exp(long e) {
  Real t(RP);
  mpfr_set_ui_2exp(t.get(), 1, e, MPFR_RNDU);
  inflate(t.get());
}

Real ComplexBall::abs_mid_upper() const {
  Real r(RP);
  mpfr_hypot(r.get(), re_.get(), im_.get(), MPFR_RNDU);
  return r;
}

Real ComplexBall::abs_mid_lower() const {
  Real r(RP);
  mpfr_hypot(r.get(), re_.get(), im_.get(), MPFR_RNDD);
  return r;
}

Real ComplexBall::abs_upper() const {
  Real r = abs_mid_upper();
  mpfr_add(r.get(), r.get(), rad_.get(), MPFR_RNDU);
  return r;
}

ComplexBall ComplexBall::from_long(long re, mpfr_prec_t prec) {
  ComplexBall z(prec);
  if (mpfr_set_si(z.re_mid_mut(), re, MPFR_RNDN) != 0)
    add_component_ulps(z, 1);
  return z;
}

ComplexBall ComplexBall::from_rational(const mpq_class& re, mpfr_prec_t prec) {
  return from_rational(re, mpq_class(0), prec);
}

ComplexBall ComplexBall::from_rational(const mpq_class& re,
                                       const mpq_class& im, mpfr_prec_t prec) {
  ComplexBall z(prec);
  bool inexact = mpfr_set_q(z.re_mid_mut(), re.get_mpq_t(), MPFR_RNDN) != 0;
  inexact |= mpfr_set_q(z.im_mid_mut(), im.get_mpq_t(), MPFR_RNDN) != 0;
  if (inexact) add_component_ulps(z, 1);
  return z;
}

ComplexBall ComplexBall::from_decimal(const std::string& re,
                                      const std::string& im,
                                      mpfr_prec_t prec) {
  ComplexBall z(prec);
  auto parse = [&](mpfr_ptr out, const std::string& s) {
    if (s.empty()) {
      mpfr_set_zero(out, 1);
      return;
    }
    char* end = nullptr;
    mpfr_strtofr(out, s.c_str(), &end, 10, MPFR_RNDN);
    if (end == s.c_str() || *end != '\0')
      throw Error("invalid decimal literal: " + s);
  };
  parse(z.re_mid_mut(), re);
  parse(z.im_mid_mut(), im);
  add_component_ulps(z, 1);
  return z;
}

ComplexBall ComplexBall::pi(mpfr_prec_t prec) {
  ComplexBall z(prec);
  mpfr_const_pi(z.re_mid_mut(), MPFR_RNDN);
  add_component_ulps(z, 1);
  return z;
}

ComplexBall ComplexBall::sqrt_positive_integer(const mpz_class& n,
                                               mpfr_prec_t prec) {
  if (sgn(n) < 0) throw Error("sqrt_positive_integer: negative argument");
  ComplexBall z(prec);
  Real t(prec);
  mpfr_set_z(t.get(), n.get_mpz_t(), MPFR_RNDN);
  mpfr_sqrt(z.re_mid_mut(), t.get(), MPFR_RNDN);
  add_component_ulps(z, 2);
  return z;
}

ComplexBall ComplexBall::log_positive_integer(const mpz_class& n,
                                              mpfr_prec_t prec) {
  if (sgn(n) <= 0) throw Error("log_positive_integer: nonpositive argument");
  ComplexBall z(prec);
  Real t(prec);
  mpfr_set_z(t.get(), n.get_mpz_t(), MPFR_RNDN);
  mpfr_log(z.re_mid_mut(), t.get(), MPFR_RNDN);
  add_component_ulps(z, 2);
  z.inflate_2exp(-static_cast<long>(prec) + 2);
  return z;
}

ComplexBall add(const ComplexBall& a, const ComplexBall& b) {
  ComplexBall z(std::max(a.prec(), b.prec()));
  mpfr_add(z.re_mid_mut(), a.re_mid(), b.re_mid(), MPFR_RNDN);
  mpfr_add(z.im_mid_mut(), a.im_mid(), b.im_mid(), MPFR_RNDN);
  mpfr_add(z.radius_mut(), a.radius(), b.radius(), MPFR_RNDU);
  add_component_ulps(z, 1);
  return z;
}

ComplexBall neg(const ComplexBall& a) {
  ComplexBall z(a.prec());
  mpfr_neg(z.re_mid_mut(), a.re_mid(), MPFR_RNDN);
  mpfr_neg(z.im_mid_mut(), a.im_mid(), MPFR_RNDN);
  mpfr_set(z.radius_mut(), a.radius(), MPFR_RNDU);
  return z;
}

ComplexBall conj(const ComplexBall& a) {
  ComplexBall z(a.prec());
  mpfr_set(z.re_mid_mut(), a.re_mid(), MPFR_RNDN);
  mpfr_neg(z.im_mid_mut(), a.im_mid(), MPFR_RNDN);
  mpfr_set(z.radius_mut(), a.radius(), MPFR_RNDU);
  return z;
}

ComplexBall sub(const ComplexBall& a, const ComplexBall& b) {
  return add(a, neg(b));
}

ComplexBall mul(const ComplexBall& a, const ComplexBall& b) {
  const mpfr_prec_t p = std::max(a.prec(), b.prec());
  ComplexBall z(p);
  Real t1(p), t2(p);
  // midpoint product
  mpfr_mul(t1.get(), a.re_mid(), b.re_mid(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im_mid(), b.im_mid(), MPFR_RNDN);
  mpfr_sub(z.re_mid_mut(), t1.get(), t2.get(), MPFR_RNDN);
  add_value_ulps(z, t1.get(), 1);
  add_value_ulps(z, t2.get(), 1);
  mpfr_mul(t1.get(), a.re_mid(), b.im_mid(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im_mid(), b.re_mid(), MPFR_RNDN);
  mpfr_add(z.im_mid_mut(), t1.get(), t2.get(), MPFR_RNDN);
  add_value_ulps(z, t1.get(), 1);
  add_value_ulps(z, t2.get(), 1);
  add_component_ulps(z, 1);
  // interval propagation: ra|b| + rb|a| + ra rb
  Real A = a.abs_mid_upper(), B = b.abs_mid_upper(), r(RP), s(RP);
  mpfr_mul(r.get(), a.radius(), B.get(), MPFR_RNDU);
  mpfr_mul(s.get(), b.radius(), A.get(), MPFR_RNDU);
  rad_accum(r.get(), s.get());
  mpfr_mul(s.get(), a.radius(), b.radius(), MPFR_RNDU);
  rad_accum(r.get(), s.get());
  z.inflate(r.get());
  return z;
}

ComplexBall mul_rational(const ComplexBall& a, const mpq_class& q) {
  ComplexBall z(a.prec());
  mpfr_mul_q(z.re_mid_mut(), a.re_mid(), q.get_mpq_t(), MPFR_RNDN);
  mpfr_mul_q(z.im_mid_mut(), a.im_mid(), q.get_mpq_t(), MPFR_RNDN);
  Real qb(RP);
  mpfr_set_q(qb.get(), q.get_mpq_t(), MPFR_RNDA);
  mpfr_abs(qb.get(), qb.get(), MPFR_RNDU);
  mpfr_mul(z.radius_mut(), a.radius(), qb.get(), MPFR_RNDU);
  add_component_ulps(z, 1);
  return z;
}

ComplexBall mul_i(const ComplexBall& a) {
  ComplexBall z = a;
  rotate_i(z);
  return z;
}

ComplexBall div(const ComplexBall& a, const ComplexBall& b) {
  const mpfr_prec_t p = std::max(a.prec(), b.prec());
  // require |b| - rb > 0
  Real Blo = b.abs_mid_lower(), gap(RP);
  mpfr_sub(gap.get(), Blo.get(), b.radius(), MPFR_RNDD);
  if (mpfr_sgn(gap.get()) <= 0) throw DivisorContainsZero();

  ComplexBall z(p);
  Real t1(p), t2(p), den(p);
  mpfr_sqr(t1.get(), b.re_mid(), MPFR_RNDN);
  mpfr_sqr(t2.get(), b.im_mid(), MPFR_RNDN);
  mpfr_add(den.get(), t1.get(), t2.get(), MPFR_RNDN);
  // re = (a.re b.re + a.im b.im)/den
  mpfr_mul(t1.get(), a.re_mid(), b.re_mid(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im_mid(), b.im_mid(), MPFR_RNDN);
  mpfr_add(t1.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_div(z.re_mid_mut(), t1.get(), den.get(), MPFR_RNDN);
  add_value_ulps(z, t2.get(), 4);
  add_value_ulps(z, z.re_mid(), 4);
  // im = (a.im b.re - a.re b.im)/den
  mpfr_mul(t1.get(), a.im_mid(), b.re_mid(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.re_mid(), b.im_mid(), MPFR_RNDN);
  mpfr_sub(t1.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_div(z.im_mid_mut(), t1.get(), den.get(), MPFR_RNDN);
  add_value_ulps(z, t2.get(), 4);
  add_value_ulps(z, z.im_mid(), 4);

  // propagation: (ra|b| + |a| rb) / ((|b|-rb)|b|)
  Real A = a.abs_mid_upper(), Bup = b.abs_mid_upper(), num(RP), s(RP);
  mpfr_mul(num.get(), a.radius(), Bup.get(), MPFR_RNDU);
  mpfr_mul(s.get(), A.get(), b.radius(), MPFR_RNDU);
  rad_accum(num.get(), s.get());
  mpfr_mul(s.get(), gap.get(), Blo.get(), MPFR_RNDD);
  mpfr_div(num.get(), num.get(), s.get(), MPFR_RNDU);
  z.inflate(num.get());
  return z;
}

ComplexBall sqrt(const ComplexBall& a, std::optional<Side> side) {
  const mpfr_prec_t p = a.prec();
  if (mpfr_zero_p(a.re_mid()) && mpfr_zero_p(a.im_mid()) && a.is_exact())
    return ComplexBall(p);
  if (ball_touches_origin(a))
    throw Error("sqrt: ball contains zero with nonzero radius");
  if (straddles_cut(a)) {
    if (!side) throw BranchCutStraddle();
    // sqrt(z) = +- i sqrt(-z), sign by the approach side
    ComplexBall z = sqrt(neg(a));
    if (*side == Side::upper)
      rotate_i(z);
    else
      rotate_minus_i(z);
    return z;
  }

  ComplexBall z(p);
  Real h(p), t(p);
  mpfr_hypot(h.get(), a.re_mid(), a.im_mid(), MPFR_RNDN);
  if (mpfr_sgn(a.re_mid()) >= 0) {
    mpfr_add(t.get(), h.get(), a.re_mid(), MPFR_RNDN);
    mpfr_div_2ui(t.get(), t.get(), 1, MPFR_RNDN);
    mpfr_sqrt(z.re_mid_mut(), t.get(), MPFR_RNDN);
    if (mpfr_zero_p(a.im_mid())) {
      mpfr_set_zero(z.im_mid_mut(), 1);
    } else {
      mpfr_div(t.get(), a.im_mid(), z.re_mid(), MPFR_RNDN);
      mpfr_div_2ui(z.im_mid_mut(), t.get(), 1, MPFR_RNDN);
    }
  } else {
    mpfr_sub(t.get(), h.get(), a.re_mid(), MPFR_RNDN);
    mpfr_div_2ui(t.get(), t.get(), 1, MPFR_RNDN);
    mpfr_sqrt(t.get(), t.get(), MPFR_RNDN);
    if (mpfr_sgn(a.im_mid()) < 0) mpfr_neg(t.get(), t.get(), MPFR_RNDN);
    mpfr_set(z.im_mid_mut(), t.get(), MPFR_RNDN);
    mpfr_div(t.get(), a.im_mid(), z.im_mid(), MPFR_RNDN);
    mpfr_div_2ui(z.re_mid_mut(), t.get(), 1, MPFR_RNDN);
  }
  // rounding: the chain above is well conditioned away from the cut
  Real m = z.abs_mid_upper(), slack(RP);
  mpfr_mul_2si(slack.get(), m.get(), -static_cast<long>(p) + 4, MPFR_RNDU);
  z.inflate(slack.get());
  // |sqrt(z) - sqrt(m)| <= r / sqrt(|m| - r)
  Real lo = a.abs_mid_lower(), prop(RP);
  mpfr_sub(prop.get(), lo.get(), a.radius(), MPFR_RNDD);
  mpfr_sqrt(prop.get(), prop.get(), MPFR_RNDD);
  mpfr_div(prop.get(), a.radius(), prop.get(), MPFR_RNDU);
  z.inflate(prop.get());
  return z;
}

ComplexBall log(const ComplexBall& a, std::optional<Side> side) {
  const mpfr_prec_t p = a.prec();
  if (ball_touches_origin(a)) throw Error("log: ball contains zero");
  if (straddles_cut(a)) {
    if (!side) throw BranchCutStraddle();
    ComplexBall z = log(neg(a));
    ComplexBall piball = ComplexBall::pi(p);
    if (*side == Side::upper)
      mpfr_add(z.im_mid_mut(), z.im_mid(), piball.re_mid(), MPFR_RNDN);
    else
      mpfr_sub(z.im_mid_mut(), z.im_mid(), piball.re_mid(), MPFR_RNDN);
    z.inflate(piball.radius());
    add_component_ulps(z, 1);
    return z;
  }

  ComplexBall z(p);
  Real h(p);
  mpfr_hypot(h.get(), a.re_mid(), a.im_mid(), MPFR_RNDN);
  mpfr_log(z.re_mid_mut(), h.get(), MPFR_RNDN);
  mpfr_atan2(z.im_mid_mut(), a.im_mid(), a.re_mid(), MPFR_RNDN);
  add_component_ulps(z, 1);
  z.inflate_2exp(-static_cast<long>(p) + 2);
  // |log z - log m| <= r / (|m| - r)
  Real lo = a.abs_mid_lower(), prop(RP);
  mpfr_sub(prop.get(), lo.get(), a.radius(), MPFR_RNDD);
  mpfr_div(prop.get(), a.radius(), prop.get(), MPFR_RNDU);
  z.inflate(prop.get());
  return z;
}

ComplexBall powi(const ComplexBall& a, long n) {
  if (n < 0) {
    ComplexBall one = ComplexBall::from_long(1, a.prec());
    return div(one, powi(a, -n));
  }
  ComplexBall acc = ComplexBall::from_long(1, a.prec());
  ComplexBall base = a;
  unsigned long e = static_cast<unsigned long>(n);
  while (e > 0) {
    if (e & 1) acc = mul(acc, base);
    e >>= 1;
    if (e > 0) base = mul(base, base);
  }
  return acc;
}

ComplexBall agm(const ComplexBall& a, const ComplexBall& b) {
  const mpfr_prec_t p = std::max(a.prec(), b.prec());
  if (mpfr_sgn(a.re_mid()) <= 0 || mpfr_sgn(b.re_mid()) <= 0)
    throw Error("agm: operands must lie in the right half-plane");
  ComplexBall x = a, y = b;
  const mpq_class half(1, 2);
  for (int iter = 0; iter < 300; ++iter) {
    ComplexBall diff = sub(x, y);
    Real dub = diff.abs_upper();
    Real scale = x.abs_mid_upper();
    mpfr_mul_2si(scale.get(), scale.get(), -static_cast<long>(p) + 2,
                 MPFR_RNDD);
    // Stop once the iterates agree to working precision, or once the
    // midpoint gap is dominated by the accumulated radii (further
    // iterations only inflate the enclosure).
    Real rsum(RP);
    mpfr_add(rsum.get(), x.radius(), y.radius(), MPFR_RNDU);
    mpfr_mul_ui(rsum.get(), rsum.get(), 16, MPFR_RNDU);
    if (mpfr_cmp(dub.get(), scale.get()) <= 0 ||
        mpfr_cmp(dub.get(), rsum.get()) <= 0) {
      ComplexBall z = x;
      mpfr_mul_ui(dub.get(), dub.get(), 4, MPFR_RNDU);
      z.inflate(dub.get());
      z.inflate(y.radius());
      return z;
    }
    ComplexBall xn = mul_rational(add(x, y), half);
    ComplexBall yn = sqrt(mul(x, y));
    x = xn;
    y = yn;
  }
  throw NonConvergence("agm");
}

bool overlaps(const ComplexBall& a, const ComplexBall& b) {
  Real dre(RP), dim(RP), d(RP), rr(RP);
  mpfr_sub(dre.get(), a.re_mid(), b.re_mid(), MPFR_RNDA);
  mpfr_sub(dim.get(), a.im_mid(), b.im_mid(), MPFR_RNDA);
  mpfr_hypot(d.get(), dre.get(), dim.get(), MPFR_RNDU);
  mpfr_add(rr.get(), a.radius(), b.radius(), MPFR_RNDU);
  return mpfr_cmp(d.get(), rr.get()) <= 0;
}

bool contains_ball(const ComplexBall& outer, const ComplexBall& inner) {
  Real dre(RP), dim(RP), d(RP);
  mpfr_sub(dre.get(), outer.re_mid(), inner.re_mid(), MPFR_RNDA);
  mpfr_sub(dim.get(), outer.im_mid(), inner.im_mid(), MPFR_RNDA);
  mpfr_hypot(d.get(), dre.get(), dim.get(), MPFR_RNDU);
  mpfr_add(d.get(), d.get(), inner.radius(), MPFR_RNDU);
  return mpfr_cmp(d.get(), outer.radius()) <= 0;
}

bool contains_point(const ComplexBall& b, mpfr_srcptr re, mpfr_srcptr im) {
  Real dre(RP), dim(RP), d(RP);
  mpfr_sub(dre.get(), b.re_mid(), re, MPFR_RNDA);
  mpfr_sub(dim.get(), b.im_mid(), im, MPFR_RNDA);
  mpfr_hypot(d.get(), dre.get(), dim.get(), MPFR_RNDU);
  return mpfr_cmp(d.get(), b.radius()) <= 0;
}

int certified_sign_real(const ComplexBall& b) {
  Real t(RP);
  mpfr_sub(t.get(), b.re_mid(), b.radius(), MPFR_RNDD);
  if (mpfr_sgn(t.get()) > 0) return 1;
  mpfr_add(t.get(), b.re_mid(), b.radius(), MPFR_RNDU);
  if (mpfr_sgn(t.get()) < 0) return -1;
  return 0;
}

long certified_decimal_digits(const ComplexBall& b) {
  Real m = b.abs_mid_lower();
  if (mpfr_zero_p(m.get())) return 0;
  if (b.is_exact())
    return static_cast<long>(static_cast<double>(b.prec()) * 0.30103) - 1;
  long bits = mpfr_get_exp(m.get()) - mpfr_get_exp(b.radius());
  if (bits <= 2) return 0;
  return static_cast<long>(static_cast<double>(bits - 2) * 0.30103);
}

std::string to_decimal(const ComplexBall& b, bool verbose) {
  long digits = certified_decimal_digits(b);
  long shown = std::max<long>(digits, 1);
  auto render = [&](mpfr_srcptr x) {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", static_cast<int>(shown), x);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  };
  std::ostringstream os;
  os << render(b.re_mid());
  if (!mpfr_zero_p(b.im_mid())) {
    if (mpfr_sgn(b.im_mid()) >= 0)
      os << " + " << render(b.im_mid()) << "*i";
    else {
      Real t(b.prec());
      mpfr_neg(t.get(), b.im_mid(), MPFR_RNDN);
      os << " - " << render(t.get()) << "*i";
    }
  }
  if (verbose) os << " (certified digits: " << digits << ")";
  return os.str();
}

}  // namespace rama
