#include "rama/hyper.hpp"

#include "rama/modeq.hpp"

namespace rama {

namespace {

constexpr mpfr_prec_t RP = ComplexBall::kRadiusPrec;

// The constant 2*psi(1) - psi(1/s) - psi(1-1/s) equals log(C_s) with an
// integer C_s for each supported family (Gauss digamma at rational points).
unsigned long log_constant_for(int s) {
  switch (s) {
    case 2: return 16;
    case 3: return 27;
    case 4: return 64;
    case 6: return 432;
    default: throw Error("unsupported s");
  }
}

// true if |x| upper bound <= num/den
bool abs_at_most(const ComplexBall& z, unsigned num, unsigned den) {
  Real ub = z.abs_upper();
  mpfr_mul_ui(ub.get(), ub.get(), den, MPFR_RNDU);
  return mpfr_cmp_ui(ub.get(), num) <= 0;
}

}  // namespace

int HyperParams::level() const { return level_for_s(s); }

ComplexBall gauss_2f1(const Rational& a, const Rational& b, const Rational& c,
                      const ComplexBall& z, mpfr_prec_t precision_bits) {
  const mpfr_prec_t wp = precision_bits + 48;
  Real q(RP);  // tail ratio |z|
  {
    Real ub = z.abs_upper();
    mpfr_set(q.get(), ub.get(), MPFR_RNDU);
  }
  if (mpfr_cmp_d(q.get(), 0.95) >= 0)
    throw UnsupportedRegion("gauss series needs |z| < 0.95");

  ComplexBall zz = z;  // promote precision
  if (zz.prec() < wp) {
    ComplexBall t(wp);
    mpfr_set(t.re_mid_mut(), z.re_mid(), MPFR_RNDN);
    mpfr_set(t.im_mid_mut(), z.im_mid(), MPFR_RNDN);
    mpfr_set(t.radius_mut(), z.radius(), MPFR_RNDU);
    zz = t;
  }

  ComplexBall sum = ComplexBall::from_long(1, wp);
  ComplexBall term = ComplexBall::from_long(1, wp);
  Real eps(RP), tail(RP), one_minus_q(RP);
  mpfr_set_ui_2exp(eps.get(), 1, -static_cast<long>(precision_bits) - 10,
                   MPFR_RNDN);
  mpfr_ui_sub(one_minus_q.get(), 1, q.get(), MPFR_RNDD);

  Rational ratio_max(1);
  for (long n = 0; n < 200000; ++n) {
    Rational r = (a + n) * (b + n) / ((c + n) * (1 + n));
    if (abs(r) > ratio_max) ratio_max = abs(r);
    term = mul_rational(mul(term, zz), r);
    sum = add(sum, term);
    // tail <= |t| * q' / (1 - q') with q' = q * sup ratio
    Real tub = term.abs_upper(), qq(RP);
    mpfr_mul_q(qq.get(), q.get(), ratio_max.get_mpq_t(), MPFR_RNDU);
    if (mpfr_cmp_d(qq.get(), 0.95) >= 0) continue;  // keep summing
    Real omq(RP);
    mpfr_ui_sub(omq.get(), 1, qq.get(), MPFR_RNDD);
    mpfr_mul(tail.get(), tub.get(), qq.get(), MPFR_RNDU);
    mpfr_div(tail.get(), tail.get(), omq.get(), MPFR_RNDU);
    if (mpfr_cmp(tail.get(), eps.get()) < 0) {
      sum.inflate(tail.get());
      return sum;
    }
  }
  throw NonConvergence("gauss_2f1");
}

namespace {

// F_s near 1 via the c = a+b logarithmic connection formula:
//   F_s(alpha) = sin(pi/s)/pi * sum c_n (log C_s - Log(1-alpha) + H_n) w^n
// with w = 1-alpha, c_n = (a)_n (b)_n / (n!)^2 and rational H_n.
ComplexBall f_near_one(const HyperParams& p, const ComplexBall& alpha,
                       std::optional<Side> side, mpfr_prec_t precision_bits) {
  const mpfr_prec_t wp = precision_bits + 48;
  const Rational a = p.a(), b = p.b();
  ComplexBall one = ComplexBall::from_long(1, wp);
  ComplexBall w = sub(one, alpha);

  ComplexBall L(wp);
  try {
    L = log(w, side);
  } catch (const BranchCutStraddle&) {
    throw BranchAmbiguous();
  }
  ComplexBall K =
      sub(ComplexBall::log_positive_integer(log_constant_for(p.s), wp), L);

  ComplexBall s1(wp), s2(wp);  // sum c_n w^n and sum c_n H_n w^n
  ComplexBall pw = ComplexBall::from_long(1, wp);
  Rational H(0);

  Real q = w.abs_upper();
  if (mpfr_cmp_d(q.get(), 0.75) >= 0)
    throw UnsupportedRegion("connection series needs |1-alpha| < 0.75");
  Real omq(RP), eps(RP);
  mpfr_ui_sub(omq.get(), 1, q.get(), MPFR_RNDD);
  mpfr_sqr(omq.get(), omq.get(), MPFR_RNDD);  // (1-q)^2
  mpfr_set_ui_2exp(eps.get(), 1, -static_cast<long>(precision_bits) - 10,
                   MPFR_RNDN);
  Real Kub = K.abs_upper();

  bool converged = false;
  long n = 0;
  for (; n < 100000; ++n) {
    s1 = add(s1, pw);
    s2 = add(s2, mul_rational(pw, H));
    // advance to n+1
    Rational r = (a + n) * (b + n) / Rational((n + 1) * (n + 1));
    pw = mul_rational(mul(pw, w), r);
    Rational two_over(2, n + 1);
    two_over.canonicalize();
    H += two_over - 1 / (a + n) - 1 / (b + n);
    // pw is now the first term not yet added, so the tail is
    // sum_{m>=0} |t_{n+1}| q^m (B + 3(m+1)) <= |t_{n+1}| (B+3) / (1-q)^2
    // with B majorizing |K| + |H| over the tail.
    Real tub = pw.abs_upper(), B(RP), bound(RP);
    mpfr_set(B.get(), Kub.get(), MPFR_RNDU);
    Real habs(RP);
    mpfr_set_q(habs.get(), H.get_mpq_t(), MPFR_RNDA);
    mpfr_abs(habs.get(), habs.get(), MPFR_RNDU);
    mpfr_add(B.get(), B.get(), habs.get(), MPFR_RNDU);
    mpfr_add_ui(B.get(), B.get(), 3, MPFR_RNDU);
    mpfr_mul(bound.get(), tub.get(), B.get(), MPFR_RNDU);
    mpfr_div(bound.get(), bound.get(), omq.get(), MPFR_RNDU);
    if (mpfr_cmp(bound.get(), eps.get()) < 0) {
      s1.inflate(bound.get());
      s2.inflate(bound.get());
      converged = true;
      break;
    }
  }
  if (!converged) throw NonConvergence("connection series");

  ComplexBall series = add(mul(K, s1), s2);
  // prefactor sin(pi/s)/pi = sqrt(l)/(2 pi)
  ComplexBall pref = div(
      ComplexBall::sqrt_positive_integer(mpz_class(p.level()), wp),
      ComplexBall::pi(wp));
  pref = mul_rational(pref, Rational(1, 2));
  return mul(pref, series);
}

}  // namespace

ComplexBall f_s(const HyperParams& p, const ComplexBall& alpha,
                std::optional<Side> side, mpfr_prec_t precision_bits) {
  if (p.s != 2 && p.s != 3 && p.s != 4 && p.s != 6)
    throw Error("unsupported s");
  if (abs_at_most(alpha, 7, 10))
    return gauss_2f1(p.a(), p.b(), Rational(1), alpha, precision_bits);
  ComplexBall w = sub(ComplexBall::from_long(1, alpha.prec()), alpha);
  if (abs_at_most(w, 7, 10))
    return f_near_one(p, alpha, side, precision_bits);
  throw UnsupportedRegion("alpha within 0.7 of neither 0 nor 1");
}

ComplexBall multiplier_numeric(const HyperParams& p, const TowerElement& alpha0,
                               const TowerElement& beta0,
                               mpfr_prec_t precision_bits,
                               std::optional<Side> side) {
  if (!(beta0 == TowerElement::from_int(1) - alpha0))
    throw Error("multiplier_numeric: beta0 != 1 - alpha0");
  const mpfr_prec_t wp = precision_bits + 32;
  ComplexBall fa = f_s(p, alpha0.to_ball(wp), side, wp);
  ComplexBall fb = f_s(p, beta0.to_ball(wp), side, wp);
  return div(fa, fb);
}

}  // namespace rama
