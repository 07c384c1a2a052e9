#include "rama/identify.hpp"

#include <algorithm>

#include "rama/errors.hpp"

namespace rama {

namespace {

using Vec = std::vector<mpz_class>;

mpz_class dot(const Vec& a, const Vec& b) {
  mpz_class s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

mpz_class round_nearest(const Rational& q) {
  // floor(q + 1/2)
  Rational t = q + Rational(1, 2);
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  return r;
}

// Textbook LLL (delta = 3/4) with exact rational Gram-Schmidt. Dimensions
// here are tiny (<= 8), so the full GSO is recomputed after each swap.
void lll_reduce(std::vector<Vec>& basis) {
  const size_t m = basis.size();
  std::vector<std::vector<Rational>> mu(m, std::vector<Rational>(m));
  std::vector<Rational> norm(m);  // squared norms of the GSO vectors

  auto gso = [&]() {
    std::vector<std::vector<Rational>> star(m,
                                            std::vector<Rational>(basis[0].size()));
    for (size_t i = 0; i < m; ++i) {
      for (size_t t = 0; t < basis[i].size(); ++t)
        star[i][t] = Rational(basis[i][t]);
      for (size_t j = 0; j < i; ++j) {
        Rational num = 0;
        for (size_t t = 0; t < basis[i].size(); ++t)
          num += Rational(basis[i][t]) * star[j][t];
        mu[i][j] = norm[j] == 0 ? Rational(0) : num / norm[j];
        for (size_t t = 0; t < basis[i].size(); ++t)
          star[i][t] -= mu[i][j] * star[j][t];
      }
      norm[i] = 0;
      for (size_t t = 0; t < basis[i].size(); ++t)
        norm[i] += star[i][t] * star[i][t];
    }
  };

  gso();
  size_t k = 1;
  size_t guard = 0;
  while (k < m) {
    if (++guard > 10000) throw NonConvergence("lattice reduction");
    for (size_t j = k; j-- > 0;) {
      if (2 * abs(mu[k][j]) > 1) {
        mpz_class r = round_nearest(mu[k][j]);
        for (size_t t = 0; t < basis[k].size(); ++t)
          basis[k][t] -= r * basis[j][t];
        gso();
      }
    }
    Rational lhs = norm[k];
    Rational rhs = (Rational(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * norm[k - 1];
    if (lhs >= rhs) {
      ++k;
    } else {
      std::swap(basis[k], basis[k - 1]);
      gso();
      k = std::max<size_t>(k - 1, 1);
    }
  }
}

bool height_ok(const Rational& q, const mpz_class& height) {
  return abs(q.get_num()) <= height && q.get_den() <= height;
}

}  // namespace

TowerElement identify_real(const Real& x, const IdentifyOptions& opts) {
  const mpfr_prec_t p = mpfr_get_prec(x.get());
  // A value below the working precision is zero.
  Real tol(32);
  mpfr_set_ui_2exp(tol.get(), 1, -static_cast<long>(p) + 6, MPFR_RNDN);
  Real ax(32);
  mpfr_abs(ax.get(), x.get(), MPFR_RNDU);
  if (mpfr_cmp(ax.get(), tol.get()) < 0) return TowerElement();

  // Values spanned by the search: 1, sqrt(r_j), x.
  std::vector<Real> vals;
  vals.emplace_back(p + 32);
  mpfr_set_ui(vals.back().get(), 1, MPFR_RNDN);
  for (const auto& r : opts.radicands) {
    Real s(p + 32);
    mpfr_set_z(s.get(), r.get_mpz_t(), MPFR_RNDN);
    mpfr_sqrt(s.get(), s.get(), MPFR_RNDN);
    vals.push_back(std::move(s));
  }
  {
    Real xv(p + 32);
    mpfr_set(xv.get(), x.get(), MPFR_RNDN);
    vals.push_back(std::move(xv));
  }

  const size_t m = vals.size();
  std::vector<Vec> basis(m, Vec(m + 1, 0));
  for (size_t i = 0; i < m; ++i) {
    basis[i][i] = 1;
    Real scaled(p + 32);
    mpfr_mul_2si(scaled.get(), vals[i].get(), static_cast<long>(p) - 8,
                 MPFR_RNDN);
    mpfr_get_z(basis[i][m].get_mpz_t(), scaled.get(), MPFR_RNDN);
  }
  lll_reduce(basis);

  for (const auto& v : basis) {
    const mpz_class& cx = v[m - 1];  // coefficient of x in the relation
    if (cx == 0) continue;
    TowerElement candidate;
    bool ok = true;
    for (size_t j = 0; j + 1 < m; ++j) {
      Rational q(-v[j], cx);
      q.canonicalize();
      if (!height_ok(q, opts.height)) {
        ok = false;
        break;
      }
      if (q == 0) continue;
      TowerElement term =
          j == 0 ? TowerElement::from_rational(q)
                 : TowerElement::term(q, mpz_class(opts.radicands[j - 1]), false);
      candidate = candidate + term;
    }
    if (!ok) continue;
    // Re-verify at doubled precision: the candidate must agree with x to
    // essentially the full input precision.
    ComplexBall cb = candidate.to_ball(2 * p);
    Real diff(2 * p);
    mpfr_sub(diff.get(), cb.re_mid(), x.get(), MPFR_RNDN);
    mpfr_abs(diff.get(), diff.get(), MPFR_RNDU);
    Real bound(32);
    mpfr_max(bound.get(), ax.get(), tol.get(), MPFR_RNDU);  // max(|x|, tiny)
    if (mpfr_cmp_ui(bound.get(), 1) < 0) mpfr_set_ui(bound.get(), 1, MPFR_RNDU);
    mpfr_mul_2si(bound.get(), bound.get(), -static_cast<long>(p) + 6, MPFR_RNDU);
    if (mpfr_cmp(diff.get(), bound.get()) <= 0) return candidate;
  }
  throw NoMatch();
}

TowerElement identify_decimal(const std::string& re, const std::string& im,
                              const IdentifyOptions& opts) {
  auto significant = [](const std::string& s) {
    size_t n = 0;
    bool seen_nonzero = false;
    for (char c : s)
      if (c >= '0' && c <= '9') {
        if (c != '0') seen_nonzero = true;
        if (seen_nonzero) ++n;
      }
    return std::max<size_t>(n, 2);
  };
  auto part = [&](const std::string& s) {
    mpfr_prec_t p = std::max<mpfr_prec_t>(
        static_cast<mpfr_prec_t>(significant(s) * 3.3219280948873623) - 2, 24);
    Real x(p);
    if (mpfr_set_str(x.get(), s.c_str(), 10, MPFR_RNDN) != 0)
      throw Error("bad decimal literal: " + s);
    return identify_real(x, opts);
  };
  TowerElement result = part(re);
  if (!im.empty() && im != "0")
    result = result + TowerElement::imaginary_unit() * part(im);
  return result;
}

}  // namespace rama
