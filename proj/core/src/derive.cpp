#include "rama/derive.hpp"

#include <algorithm>
#include <complex>
#include <optional>
#include <set>
#include <vector>

#include "rama/errors.hpp"
#include "rama/hyper.hpp"
#include "rama/identify.hpp"
#include "rama/piengine.hpp"

namespace rama {

namespace {

// cos(idx * 15 degrees) for the angles whose cosine lies in Q(sqrt(2), sqrt(3)):
// multiples of 30 degrees (even idx) and of 45 degrees (idx = 3 mod 6, odd).
TowerElement cos24(int idx) {
  idx = ((idx % 24) + 24) % 24;
  auto q = [](long num, long den) {
    return TowerElement::from_rational(Rational(num, den));
  };
  auto rad = [](long r, long num, long den) {
    return TowerElement::term(Rational(num, den), mpz_class(r), false);
  };
  switch (idx) {
    case 0: return q(1, 1);
    case 2: return rad(3, 1, 2);
    case 3: return rad(2, 1, 2);
    case 4: return q(1, 2);
    case 6: return TowerElement();
    case 8: return q(-1, 2);
    case 9: return rad(2, -1, 2);
    case 10: return rad(3, -1, 2);
    case 12: return q(-1, 1);
    case 14: return rad(3, -1, 2);
    case 15: return rad(2, -1, 2);
    case 16: return q(-1, 2);
    case 18: return TowerElement();
    case 20: return q(1, 2);
    case 21: return rad(2, 1, 2);
    case 22: return rad(3, 1, 2);
    default: throw NotRepresentable("root of unity outside Q(i, sqrt2, sqrt3)");
  }
}

// e^(2 pi i j / k) for k dividing 24 with the above restriction.
TowerElement root_of_unity(int k, int j) {
  if (24 % k != 0) throw NotRepresentable("unsupported root-of-unity order");
  int idx = 24 / k * j;
  return cos24(idx) + TowerElement::imaginary_unit() * cos24(idx - 6);
}

TowerElement sqrt_positive_rational(const Rational& q) {
  if (sgn(q) <= 0) throw Error("sqrt_positive_rational: need q > 0");
  mpz_class nd = q.get_num() * q.get_den();
  mpz_class sq;
  mpz_class m = squarefree_part(nd, sq);
  return TowerElement::term(Rational(sq, q.get_den()), m, false);
}

std::vector<std::complex<double>> durand_kerner(
    std::vector<std::complex<double>> c) {
  int n = static_cast<int>(c.size()) - 1;
  for (int i = 0; i <= n; ++i) c[i] /= c[n];
  std::vector<std::complex<double>> r(n);
  std::complex<double> seed(0.4, 0.9), p(1, 0);
  for (int j = 0; j < n; ++j) {
    p *= seed;
    r[j] = p;
  }
  for (int iter = 0; iter < 500; ++iter) {
    double worst = 0;
    for (int j = 0; j < n; ++j) {
      std::complex<double> f(0, 0);
      for (int i = n; i >= 0; --i) f = f * r[j] + c[i];
      std::complex<double> den(1, 0);
      for (int l = 0; l < n; ++l)
        if (l != j) den *= r[j] - r[l];
      if (den == std::complex<double>(0, 0)) continue;
      std::complex<double> step = f / den;
      r[j] -= step;
      worst = std::max(worst, std::abs(step));
    }
    if (worst < 1e-14) break;
  }
  return r;
}

ComplexBall ball_from_doubles(double re, double im, mpfr_prec_t p) {
  ComplexBall b(p);
  mpfr_set_d(b.re_mid_mut(), re, MPFR_RNDN);
  mpfr_set_d(b.im_mid_mut(), im, MPFR_RNDN);
  return b;
}

ComplexBall horner(const std::vector<ComplexBall>& c, const ComplexBall& x) {
  ComplexBall acc = c.back();
  for (size_t i = c.size() - 1; i-- > 0;) acc = add(mul(acc, x), c[i]);
  return acc;
}

TowerElement horner_exact(const std::vector<TowerElement>& c,
                          const TowerElement& x) {
  TowerElement acc = c.back();
  for (size_t i = c.size() - 1; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

// Newton refinement of a double-seed root; midpoint iteration only, the
// result is made rigorous by exact back-substitution later.
std::optional<ComplexBall> polish_root(const std::vector<ComplexBall>& c,
                                       const std::vector<ComplexBall>& dc,
                                       std::complex<double> seed,
                                       mpfr_prec_t p) {
  ComplexBall x = ball_from_doubles(seed.real(), seed.imag(), p);
  try {
    for (int iter = 0; iter < 12; ++iter) {
      ComplexBall f = horner(c, x);
      ComplexBall df = horner(dc, x);
      x = sub(x, div(f, df));
      x.clear_radius();
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  return x;
}

// Multiplicative closure (squarefree parts of pairwise products) of a
// radicand set; the lattice search space must contain products.
std::vector<mpz_class> closure(std::set<mpz_class> in) {
  in.erase(mpz_class(1));
  bool grew = true;
  while (grew && in.size() < 16) {
    grew = false;
    std::vector<mpz_class> cur(in.begin(), in.end());
    for (size_t i = 0; i < cur.size() && !grew; ++i)
      for (size_t j = i + 1; j < cur.size() && !grew; ++j) {
        mpz_class sq;
        mpz_class m = squarefree_part(cur[i] * cur[j], sq);
        if (m != 1 && !in.count(m)) {
          in.insert(m);
          grew = true;
        }
      }
  }
  return {in.begin(), in.end()};
}

std::optional<TowerElement> identify_ball(const ComplexBall& b,
                                          const IdentifyOptions& opts,
                                          mpfr_prec_t p) {
  auto part = [&](const mpfr_t mid) -> std::optional<TowerElement> {
    Real x(p);
    mpfr_set(x.get(), mid, MPFR_RNDN);
    try {
      return identify_real(x, opts);
    } catch (const NoMatch&) {
      return std::nullopt;
    }
  };
  auto re = part(b.re_mid());
  if (!re) return std::nullopt;
  auto im = part(b.im_mid());
  if (!im) return std::nullopt;
  return *re + TowerElement::imaginary_unit() * *im;
}

struct Candidate {
  TowerElement u0, u0sq, zeta, alpha0;
  bool has_u = false;
  double re_u, im_u, re_z, im_z;
};

AlphaBetaDerivs point_derivatives(const ModularEquation& eq,
                                  const SingularPoint& pt, TowerElement* d1_out,
                                  TowerElement* d2_out);
PolyUV half_poly(const PolyUV& P);

double mid_double(const mpfr_t m) { return mpfr_get_d(m, MPFR_RNDN); }

}  // namespace

SingularPoint find_singular_point(const ModularEquation& eq, SeriesClass klass) {
  const int k = eq.k;
  const mpfr_prec_t wp = 320;
  const mpfr_prec_t idp = 144;  // identification precision

  std::set<mpz_class> rad_set;
  for (const auto& [key, c] : eq.poly.terms())
    for (const auto& r : c.radicands()) rad_set.insert(r);
  rad_set.insert(mpz_class(2));
  rad_set.insert(mpz_class(3));
  rad_set.insert(mpz_class(eq.level));
  IdentifyOptions opts;
  opts.radicands = closure(rad_set);
  opts.height = mpz_class(1000000);

  std::vector<Candidate> candidates;
  bool unidentified_root = false;

  for (int j = 0; j < k; ++j) {
    TowerElement zeta = root_of_unity(k, j);
    std::vector<TowerElement> coeffs = substitute_scaled(eq.poly, zeta, k);
    while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    if (coeffs.size() < 2) continue;

    // P(u, zeta u) has only even powers of u (every monomial of a registry
    // equation has even total degree), so it is a polynomial in t = u^2;
    // candidates are checked exactly against that even form, which works
    // even when u0 itself is not tower-representable.
    std::vector<TowerElement> even_coeffs;
    for (size_t i = 0; i < coeffs.size(); ++i) {
      if (i % 2 == 0) {
        even_coeffs.push_back(coeffs[i]);
      } else if (!coeffs[i].is_zero()) {
        throw NotRepresentable("equation has a monomial of odd total degree");
      }
    }

    std::vector<ComplexBall> cb, dcb;
    std::vector<std::complex<double>> cd;
    for (size_t i = 0; i < coeffs.size(); ++i) {
      ComplexBall b = coeffs[i].to_ball(wp);
      b.clear_radius();
      cd.emplace_back(mid_double(b.re_mid()), mid_double(b.im_mid()));
      if (i > 0) {
        ComplexBall d = mul_rational(b, Rational(static_cast<long>(i)));
        dcb.push_back(d);
      }
      cb.push_back(std::move(b));
    }

    for (const auto& seed : durand_kerner(cd)) {
      if (std::abs(seed) < 1e-9) continue;
      // Cheap numeric class filter before the costly identification.
      std::complex<double> wnum = std::pow(seed, k);
      if (std::abs(wnum.imag()) > 1e-7) continue;
      // |w| < 1/4 keeps |z| = 4|w| < 1 (the series must converge).
      if (std::abs(wnum.real()) >= 0.25) continue;
      if (klass == SeriesClass::alternating && wnum.real() >= -1e-12) continue;
      if (klass == SeriesClass::positive && wnum.real() <= 1e-12) continue;

      auto root = polish_root(cb, dcb, seed, wp);
      if (!root) continue;

      // Identify u^2 or u^4 in the coefficient tower (the square of any
      // element of that field stays inside it, so u itself never needs a
      // larger basis), then undo the squarings with exact square roots
      // steered by the numeric powers. u0 itself may fail to denest (a 16th
      // root of unity direction); the candidate is still usable through
      // t = u^2 and the even form of the equation.
      std::vector<ComplexBall> pw{*root};
      for (int t = 1; t <= 2; ++t) {
        ComplexBall sq = mul(pw.back(), pw.back());
        sq.clear_radius();
        pw.push_back(std::move(sq));
      }
      TowerElement u0sq;
      bool found = false;
      for (int t = 1; t <= 2 && !found; ++t) {
        auto e = identify_ball(pw[t], opts, idp);
        if (!e) continue;
        TowerElement tsq = *e;
        try {
          for (int back = t; back-- > 1;) tsq = sqrt(tsq, pw[back]);
        } catch (const Error&) {
          continue;
        }
        if (!horner_exact(even_coeffs, tsq).is_zero()) continue;
        u0sq = tsq;
        found = true;
      }
      if (!found) {
        unidentified_root = true;
        continue;
      }
      TowerElement u0;
      bool has_u = false;
      try {
        u0 = sqrt(u0sq, pw[0]);
        has_u = true;
      } catch (const Error&) {
      }

      TowerElement w = u0sq.pow(k / 2);
      if (!w.is_real()) continue;
      const TowerElement quarter =
          TowerElement::from_rational(Rational(1, 4));
      if (klass == SeriesClass::alternating) {
        if (sign_real(w) >= 0) continue;
        if (sign_real(w + quarter) <= 0) continue;  // |z| = 4|w| < 1
      } else {
        if (sign_real(w) <= 0) continue;
        if (sign_real(quarter - w) <= 0) continue;
      }

      // alpha0 = (1 - sqrt(1 - 4 w)) / 2, positive real branch.
      TowerElement disc = TowerElement::from_int(1) -
                          TowerElement::from_rational(Rational(4)) * w;
      ComplexBall hint = rama::sqrt(disc.to_ball(128), std::nullopt);
      TowerElement sq;
      try {
        sq = sqrt(disc, hint);
      } catch (const Error&) {
        unidentified_root = true;
        continue;
      }
      if (sign_real(sq) < 0) sq = -sq;
      TowerElement alpha0 =
          (TowerElement::from_int(1) - sq) * TowerElement::from_rational(
                                                 Rational(1, 2));
      if (alpha0.is_zero() ||
          alpha0 == TowerElement::from_rational(Rational(1, 2)) ||
          alpha0 == TowerElement::from_int(1))
        continue;

      bool dup = false;
      for (const auto& c : candidates)
        if (c.u0sq == u0sq && c.zeta == zeta &&
            (!c.has_u || !has_u || c.u0 == u0))
          dup = true;
      if (dup) continue;

      ComplexBall zb = zeta.to_ball(64);
      candidates.push_back(Candidate{u0, u0sq, zeta, alpha0, has_u,
                                     mid_double(root->re_mid()),
                                     mid_double(root->im_mid()),
                                     mid_double(zb.re_mid()),
                                     mid_double(zb.im_mid())});
    }
  }

  if (candidates.empty()) {
    if (unidentified_root)
      throw IdentificationFailed(
          "roots found numerically but none identified exactly");
    throw NoSingularPoint(eq.name + ": no " + to_string(klass) +
                          "-class singular point");
  }

  auto key_less = [](const Candidate& a, const Candidate& b) {
    auto cmp = [](double x, double y) {
      if (x > y + 1e-9) return -1;
      if (x < y - 1e-9) return 1;
      return 0;
    };
    if (int c = cmp(a.re_u, b.re_u)) return c < 0;
    if (int c = cmp(a.im_u, b.im_u)) return c < 0;
    if (int c = cmp(a.re_z, b.re_z)) return c < 0;
    return cmp(a.im_z, b.im_z) < 0;
  };
  std::sort(candidates.begin(), candidates.end(), key_less);

  // Several exact singular points can survive the class filter; only those
  // whose squared multiplier has a Theorem-1 form yield a rational series.
  // m^2 = 1/d (positive class) or (2d - l)/2d^2 + sqrt(l (4d - l))/2d^2 i
  // (alternating class), checked exactly.
  const long d = eq.degree;
  const int ell = eq.level;
  TowerElement m2_expected;
  if (klass == SeriesClass::positive) {
    m2_expected = TowerElement::from_rational(Rational(1, d));
  } else {
    m2_expected =
        TowerElement::from_rational(Rational(2 * d - ell, 2 * d * d)) +
        TowerElement::imaginary_unit() *
            sqrt_positive_rational(Rational(ell * (4 * d - ell))) *
            TowerElement::from_rational(Rational(1, 2 * d * d));
  }
  const TowerElement one = TowerElement::from_int(1);
  for (const Candidate& cand : candidates) {
    SingularPoint pt;
    pt.u0 = cand.u0;
    pt.u0sq = cand.u0sq;
    pt.u_in_tower = cand.has_u;
    pt.zeta = cand.zeta;
    if (cand.has_u) pt.v0 = cand.zeta * cand.u0;
    pt.alpha0 = cand.alpha0;
    pt.beta0 = one - cand.alpha0;
    try {
      AlphaBetaDerivs ab = point_derivatives(eq, pt, nullptr, nullptr);
      if (ab.beta1.is_zero()) continue;
      TowerElement m2 = (pt.beta0 * (one - pt.beta0)) *
                        (pt.alpha0 * (one - pt.alpha0)).inv() * ab.alpha1 *
                        ab.beta1.inv() *
                        TowerElement::from_rational(Rational(1, d));
      // Accept the multiplier square up to conjugation: the two complex-
      // conjugate branches through alpha0 carry conjugate values of
      // alpha'/beta', and the source derivation mixes both orientations.
      if (!(m2 == m2_expected || m2 == m2_expected.conjugate())) continue;
      // The series coefficient b = 2 (1 - 2 alpha0) sqrt(...) must come out
      // rational or a rational multiple of sqrt(l), or the point cannot
      // yield a rational series; several points can share the right
      // multiplier form but fail this (e.g. distinct alternating points of
      // the same equation).
      TowerElement b =
          TowerElement::from_int(2) * (one - TowerElement::from_int(2) * pt.alpha0) *
          (klass == SeriesClass::positive
               ? sqrt_positive_rational(Rational(d, ell))
               : sqrt_positive_rational(Rational(4 * d - ell, 4 * ell)));
      TowerElement qb = b * sqrt_positive_rational(Rational(ell)).inv();
      if (!qb.is_rational() && !b.is_rational()) continue;
      return pt;
    } catch (const Error&) {
      continue;
    }
  }
  throw NoSingularPoint(eq.name + ": no " + to_string(klass) +
                        "-class point with a Theorem-1 multiplier");
}

namespace {

// dY/dX and d2Y/dX2 of the implicit function Y(X) defined by F(X, Y) = 0,
// at the given point (the standard implicit-function closed forms).
std::pair<TowerElement, TowerElement> implicit_derivs_at(const PolyUV& F,
                                                         const TowerElement& X,
                                                         const TowerElement& Y) {
  PolyUV Fx = F.d_du(), Fy = F.d_dv();
  TowerElement fx = Fx.eval(X, Y);
  TowerElement fy = Fy.eval(X, Y);
  if (fy.is_zero()) throw SingularJacobian();
  TowerElement fy_inv = fy.inv();
  TowerElement y1 = -(fx * fy_inv);

  TowerElement fxx = Fx.d_du().eval(X, Y);
  TowerElement fxy = Fx.d_dv().eval(X, Y);
  TowerElement fyy = Fy.d_dv().eval(X, Y);
  TowerElement two = TowerElement::from_int(2);
  TowerElement y2 = -((fxx + two * fxy * y1 + fyy * y1 * y1) * fy_inv);
  return {y1, y2};
}

// P(u, v) rewritten as a polynomial G(t, x) with t = u^2 and x = v/u:
// u^a v^b = t^((a+b)/2) x^b. Requires every monomial to have even total
// degree, which holds for all registry equations; this is what lets the
// pipeline run at points whose u0 is not tower-representable.
PolyUV half_poly(const PolyUV& P) {
  PolyUV G;
  for (const auto& [key, c] : P.terms()) {
    const auto& [a, b] = key;
    if ((a + b) % 2 != 0)
      throw NotRepresentable("equation has a monomial of odd total degree");
    G.add_term((a + b) / 2, b, c);
  }
  return G;
}

// Solves alpha' + beta' = s', alpha' beta + alpha beta' = p' and the
// differentiated pair for the four derivative unknowns.
AlphaBetaDerivs solve_alpha_beta(const TowerElement& alpha,
                                 const TowerElement& beta,
                                 const TowerElement& sp, const TowerElement& pp,
                                 const TowerElement& spp,
                                 const TowerElement& ppp) {
  TowerElement inv_ba = (beta - alpha).inv();
  AlphaBetaDerivs ab;
  ab.alpha1 = (pp - alpha * sp) * inv_ba;
  ab.beta1 = sp - ab.alpha1;
  ab.alpha2 =
      (ppp - TowerElement::from_int(2) * ab.alpha1 * ab.beta1 - alpha * spp) *
      inv_ba;
  ab.beta2 = spp - ab.alpha2;
  return ab;
}

// alpha, beta derivatives with respect to t = u^2, from
// alpha beta = t^h and alpha + beta = 1 + t^h (1 - x^k) with h = k/2 and
// x = v/u; x1, x2 are dx/dt, d2x/dt2 from the half-polynomial.
AlphaBetaDerivs alpha_beta_derivatives_t(const ModularEquation& eq,
                                         const SingularPoint& pt,
                                         const TowerElement& x1,
                                         const TowerElement& x2) {
  const long k = eq.k;
  const long h = k / 2;
  const TowerElement &t = pt.u0sq, &x = pt.zeta;
  const TowerElement &alpha = pt.alpha0, &beta = pt.beta0;
  if (alpha == beta)
    throw DegeneratePoint("alpha0 = beta0 or vanishing derivative");

  TowerElement hq = TowerElement::from_int(h);
  TowerElement hh1 = TowerElement::from_int(h * (h - 1));
  TowerElement kq = TowerElement::from_int(k);
  TowerElement kk1 = TowerElement::from_int(k * (k - 1));
  TowerElement th1 = t.pow(h - 1), th2 = t.pow(h - 2), th = t.pow(h);
  TowerElement xk = x.pow(k), xk1 = x.pow(k - 1), xk2 = x.pow(k - 2);
  TowerElement one = TowerElement::from_int(1);

  TowerElement pp = hq * th1;
  TowerElement ppp = hh1 * th2;
  TowerElement sp = hq * th1 * (one - xk) - th * kq * xk1 * x1;
  TowerElement spp = hh1 * th2 * (one - xk) -
                     TowerElement::from_int(2) * hq * th1 * kq * xk1 * x1 -
                     th * (kk1 * xk2 * x1 * x1 + kq * xk1 * x2);
  return solve_alpha_beta(alpha, beta, sp, pp, spp, ppp);
}

}  // namespace

std::pair<TowerElement, TowerElement> implicit_derivatives(
    const PolyUV& P, const SingularPoint& pt) {
  return implicit_derivs_at(P, pt.u0, pt.v0);
}

AlphaBetaDerivs alpha_beta_derivatives(const ModularEquation& eq,
                                       const SingularPoint& pt,
                                       const TowerElement& v1,
                                       const TowerElement& v2) {
  const long k = eq.k;
  const TowerElement &u = pt.u0, &v = pt.v0;
  const TowerElement &alpha = pt.alpha0, &beta = pt.beta0;
  if (alpha == beta) throw DegeneratePoint("alpha0 = beta0 or vanishing derivative");

  TowerElement kq = TowerElement::from_int(k);
  TowerElement kk1 = TowerElement::from_int(k * (k - 1));
  TowerElement uk1 = u.pow(k - 1), uk2 = u.pow(k - 2);
  TowerElement vk1 = v.pow(k - 1), vk2 = v.pow(k - 2);

  // s = alpha + beta = u^k - v^k + 1, p = alpha beta = u^k
  TowerElement sp = kq * uk1 - kq * vk1 * v1;
  TowerElement pp = kq * uk1;
  TowerElement spp = kk1 * uk2 - kk1 * vk2 * v1 * v1 - kq * vk1 * v2;
  TowerElement ppp = kk1 * uk2;
  return solve_alpha_beta(alpha, beta, sp, pp, spp, ppp);
}

namespace {

// Implicit and alpha/beta derivatives along whichever variable the point
// supports: u when u0 is tower-representable, t = u^2 otherwise.
AlphaBetaDerivs point_derivatives(const ModularEquation& eq,
                                  const SingularPoint& pt, TowerElement* d1_out,
                                  TowerElement* d2_out) {
  if (pt.u_in_tower) {
    auto [v1, v2] = implicit_derivatives(eq.poly, pt);
    if (d1_out) *d1_out = v1;
    if (d2_out) *d2_out = v2;
    return alpha_beta_derivatives(eq, pt, v1, v2);
  }
  auto [x1, x2] = implicit_derivs_at(half_poly(eq.poly), pt.u0sq, pt.zeta);
  if (d1_out) *d1_out = x1;
  if (d2_out) *d2_out = x2;
  return alpha_beta_derivatives_t(eq, pt, x1, x2);
}

}  // namespace

TowerElement multiplier_at(const SingularPoint& pt, const AlphaBetaDerivs& ab,
                           long d, int ell, const ComplexBall& numeric_hint,
                           SeriesClass* klass_out) {
  const TowerElement one = TowerElement::from_int(1);
  const TowerElement &alpha = pt.alpha0, &beta = pt.beta0;
  if (ab.beta1.is_zero()) throw DegeneratePoint("alpha0 = beta0 or vanishing derivative");
  TowerElement m2 = (beta * (one - beta)) * (alpha * (one - alpha)).inv() *
                    ab.alpha1 * ab.beta1.inv() *
                    TowerElement::from_rational(Rational(1, d));
  // The analytic multiplier (the hypergeometric ratio, supplied as the
  // numeric hint) squares to the right-hand side up to the orientation of
  // the branch through alpha0. Pick the Theorem-1 form consistent with
  // both: its square must equal the right-hand side or its conjugate, and
  // the hint ball must contain it.
  TowerElement positive_form = sqrt_positive_rational(Rational(1, d));
  TowerElement alt_form =
      sqrt_positive_rational(Rational(4 * d - ell)) *
          TowerElement::from_rational(Rational(1, 2 * d)) +
      TowerElement::imaginary_unit() * sqrt_positive_rational(Rational(ell)) *
          TowerElement::from_rational(Rational(1, 2 * d));
  for (const auto& [form, klass] :
       {std::pair{positive_form, SeriesClass::positive},
        std::pair{alt_form, SeriesClass::alternating}}) {
    TowerElement sq = form * form;
    if ((sq == m2 || sq == m2.conjugate()) && contains(numeric_hint, form)) {
      if (klass_out) *klass_out = klass;
      return form;
    }
  }
  throw UnrecognizedMultiplier("m0 matches neither Theorem-1 form");
}

TowerElement m_derivative_ratio(const SingularPoint& pt,
                                const AlphaBetaDerivs& ab,
                                const TowerElement& m0) {
  const TowerElement one = TowerElement::from_int(1);
  const TowerElement &alpha = pt.alpha0, &beta = pt.beta0;
  if (alpha.is_zero() || beta.is_zero() || alpha == one || beta == one ||
      ab.alpha1.is_zero() || ab.beta1.is_zero())
    throw DegeneratePoint("alpha0 = beta0 or vanishing derivative");
  TowerElement bracket =
      ab.beta1 * beta.inv() - ab.beta1 * (one - beta).inv() -
      ab.alpha1 * alpha.inv() + ab.alpha1 * (one - alpha).inv() +
      ab.alpha2 * ab.alpha1.inv() - ab.beta2 * ab.beta1.inv();
  // Differentiating m^2 = (1/d) (beta(1-beta)/(alpha(1-alpha))) (alpha'/beta')
  // only holds for the square root consistent with that identity; when the
  // supplied multiplier sits on the conjugate branch, its conjugate is the
  // consistent root (the resulting ratio is the same real rational either way).
  TowerElement dm2 = (beta * (one - beta)) * (alpha * (one - alpha)).inv() *
                     ab.alpha1 * ab.beta1.inv();  // d * m^2
  TowerElement m = (m0 * m0 * dm2.inv()).is_rational() ? m0 : m0.conjugate();
  return m * (TowerElement::from_int(2) * ab.alpha1).inv() * bracket;
}

SeriesCertificate series_parameters(const ModularEquation& eq,
                                    const SingularPoint& pt,
                                    const DerivationTrace& trace,
                                    SeriesClass klass) {
  const long d = trace.d;
  const int ell = trace.ell;
  const TowerElement one = TowerElement::from_int(1);
  const TowerElement &alpha = pt.alpha0, &beta = pt.beta0;

  TowerElement z = TowerElement::from_int(4) * alpha * beta;
  if (!z.is_rational()) throw NonRationalSeries("z or a, b not rational multiples of sqrt(l)");

  TowerElement two_1m2a =
      TowerElement::from_int(2) * (one - TowerElement::from_int(2) * alpha);
  TowerElement b =
      klass == SeriesClass::positive
          ? two_1m2a * sqrt_positive_rational(Rational(d, ell))
          : two_1m2a * sqrt_positive_rational(Rational(4 * d - ell, 4 * ell));
  TowerElement a = TowerElement::from_int(-2) * alpha * beta * trace.m_ratio *
                   TowerElement::from_int(d) *
                   sqrt_positive_rational(Rational(1, ell));

  // Either a = q_a sqrt(ell), b = q_b sqrt(ell) with rational q (the
  // right-hand side keeps a sqrt(ell) factor), or a and b are themselves
  // rational (radical-free right-hand side); both occur in the registry.
  TowerElement sl = sqrt_positive_rational(Rational(ell));
  TowerElement qa_e = a * sl.inv(), qb_e = b * sl.inv();
  bool level_radical = true;
  Rational qa, qb;
  if (qa_e.is_rational() && qb_e.is_rational()) {
    qa = qa_e.rational_value();
    qb = qb_e.rational_value();
  } else if (a.is_rational() && b.is_rational()) {
    level_radical = false;
    qa = a.rational_value();
    qb = b.rational_value();
  } else {
    throw NonRationalSeries("z or a, b not rational multiples of sqrt(l)");
  }

  mpz_class den_lcm, num_gcd;
  mpz_lcm(den_lcm.get_mpz_t(), qa.get_den_mpz_t(), qb.get_den_mpz_t());
  mpz_gcd(num_gcd.get_mpz_t(), qa.get_num_mpz_t(), qb.get_num_mpz_t());
  Rational rho(den_lcm, num_gcd);
  rho.canonicalize();

  RationalForm rf;
  Rational A = rho * qb, B = rho * qa;
  A.canonicalize();
  B.canonicalize();
  rf.A = A.get_num();
  rf.B = B.get_num();
  Rational zr = z.rational_value();
  rf.sign = sgn(zr) < 0 ? -1 : 1;
  rf.M = 1 / abs(zr);
  rf.M.canonicalize();
  rf.level_radical = level_radical;
  rf.C = level_radical ? rho / ell : rho;
  rf.C.canonicalize();

  SeriesCertificate cert;
  cert.equation_name = eq.name;
  cert.s = eq.s;
  cert.ell = ell;
  cert.d = d;
  cert.klass = klass;
  cert.z = z;
  cert.a = a;
  cert.b = b;
  cert.rational_form = rf;
  cert.trace = trace;
  cert.point = pt;
  cert.equation_source = render(eq);
  return cert;
}

SeriesCertificate derive_series(const ModularEquation& eq, SeriesClass klass) {
  SingularPoint pt = find_singular_point(eq, klass);
  TowerElement d1, d2;
  AlphaBetaDerivs ab = point_derivatives(eq, pt, &d1, &d2);

  HyperParams hp{eq.s};
  ComplexBall hint = multiplier_numeric(hp, pt.alpha0, pt.beta0, 96);

  SeriesClass m_klass;
  TowerElement m0 =
      multiplier_at(pt, ab, eq.degree, eq.level, hint, &m_klass);
  if (m_klass != klass)
    throw UnrecognizedMultiplier("m0 matches neither Theorem-1 form");
  TowerElement mr = m_derivative_ratio(pt, ab, m0);

  DerivationTrace trace;
  trace.wrt_u = pt.u_in_tower;
  trace.v1 = d1;
  trace.v2 = d2;
  trace.alpha1 = ab.alpha1;
  trace.beta1 = ab.beta1;
  trace.alpha2 = ab.alpha2;
  trace.beta2 = ab.beta2;
  trace.m0 = m0;
  trace.m_ratio = mr;
  trace.d = eq.degree;
  trace.ell = eq.level;
  trace.s = eq.s;
  return series_parameters(eq, pt, trace, klass);
}

VerificationReport verify_certificate(const SeriesCertificate& cert,
                                      long digits) {
  VerificationReport report;
  auto check = [&report](const std::string& name, bool pass,
                         const std::string& detail = "") {
    report.checks.push_back({name, pass, detail});
  };
  const TowerElement one = TowerElement::from_int(1);
  const SingularPoint& pt = cert.point;
  const DerivationTrace& tr = cert.trace;

  try {
    ModularEquation eq = parse_equation(cert.equation_source);
    // The point always satisfies the even form of the equation at
    // (t, x) = (u0^2, v/u); when u0 is representable, also the original
    // form and the u0 <-> u0sq consistency.
    bool ok = half_poly(eq.poly).eval(pt.u0sq, pt.zeta).is_zero();
    if (pt.u_in_tower)
      ok = ok && eval_P(eq.poly, pt.u0, pt.v0).is_zero() &&
           pt.u0 * pt.u0 == pt.u0sq && pt.v0 == pt.zeta * pt.u0;
    check("equation-root", ok);
  } catch (const Error& e) {
    check("equation-root", false, e.what());
  }
  check("beta-complement", pt.beta0 == one - pt.alpha0);
  check("z-value",
        cert.z == TowerElement::from_int(4) * pt.alpha0 * pt.beta0);
  {
    bool ok = false;
    std::string detail;
    try {
      TowerElement rhs = (pt.beta0 * (one - pt.beta0)) *
                         (pt.alpha0 * (one - pt.alpha0)).inv() * tr.alpha1 *
                         tr.beta1.inv() *
                         TowerElement::from_rational(Rational(1, tr.d));
      TowerElement sq = tr.m0 * tr.m0;
      ok = sq == rhs || sq == rhs.conjugate();
    } catch (const Error& e) {
      detail = e.what();
    }
    check("multiplier-identity", ok, detail);
  }
  {
    TowerElement expected =
        cert.klass == SeriesClass::positive
            ? sqrt_positive_rational(Rational(1, cert.d))
            : sqrt_positive_rational(Rational(4 * cert.d - cert.ell)) *
                      TowerElement::from_rational(Rational(1, 2 * cert.d)) +
                  TowerElement::imaginary_unit() *
                      sqrt_positive_rational(Rational(cert.ell)) *
                      TowerElement::from_rational(Rational(1, 2 * cert.d));
    check("multiplier-class-form", tr.m0 == expected);
  }
  {
    // With a sqrt(l) right-hand side: a = B sqrt(l)/(C l), b = A sqrt(l)/(C l).
    // Radical-free: a = B/C, b = A/C. Either way z = sign/M.
    bool ok = false;
    std::string detail;
    try {
      const RationalForm& rf = cert.rational_form;
      TowerElement a_back, b_back;
      if (rf.level_radical) {
        TowerElement sl = sqrt_positive_rational(Rational(cert.ell));
        Rational cl = rf.C * cert.ell;
        a_back = sl * TowerElement::from_rational(Rational(rf.B) / cl);
        b_back = sl * TowerElement::from_rational(Rational(rf.A) / cl);
      } else {
        a_back = TowerElement::from_rational(Rational(rf.B) / rf.C);
        b_back = TowerElement::from_rational(Rational(rf.A) / rf.C);
      }
      ok = cert.a == a_back && cert.b == b_back && cert.z.is_rational() &&
           cert.z.rational_value() == rf.z();
    } catch (const Error& e) {
      detail = e.what();
    }
    check("rational-form-reconstruction", ok, detail);
  }
  {
    bool ok = false;
    std::string detail;
    try {
      HyperParams hp{cert.s};
      ComplexBall mn = multiplier_numeric(hp, pt.alpha0, pt.beta0, 80);
      long certified = certified_decimal_digits(mn);
      ok = certified >= 20 && contains(mn, tr.m0);
      if (!ok)
        detail = "certified digits: " + std::to_string(certified);
    } catch (const Error& e) {
      detail = e.what();
    }
    check("multiplier-numeric-20-digits", ok, detail);
  }
  {
    bool ok = false;
    std::string detail;
    try {
      ok = pi_digits(cert, digits) == machin_pi(digits);
      if (!ok) detail = "digit mismatch against arctan reference";
    } catch (const Error& e) {
      detail = e.what();
    }
    check("pi-digits-vs-arctan", ok, detail);
  }
  return report;
}

}  // namespace rama
