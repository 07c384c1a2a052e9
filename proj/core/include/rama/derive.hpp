#pragma once

#include <utility>

#include "rama/certificate.hpp"
#include "rama/modeq.hpp"

namespace rama {

/// Locates a singular point with beta = 1 - alpha: enumerates the k-th roots
/// of unity zeta in Q(i, sqrt(2), sqrt(3)), solves P(u, zeta u) = 0
/// numerically, reconstructs each root exactly (lattice identification of
/// u^(2^j) followed by exact square roots), verifies P(u0, v0) = 0 exactly,
/// and filters by series class: alternating needs u0^k real negative,
/// positive needs u0^k in (0, 1/4). Degenerate points (alpha0 in {0, 1/2, 1})
/// are rejected.
SingularPoint find_singular_point(const ModularEquation& eq, SeriesClass klass);

/// dv/du and d2v/du2 at the point, by implicit differentiation of P(u,v) = 0.
std::pair<TowerElement, TowerElement> implicit_derivatives(
    const PolyUV& P, const SingularPoint& pt);

struct AlphaBetaDerivs {
  TowerElement alpha1, beta1, alpha2, beta2;
};

/// First and second derivatives of alpha, beta at u0, from
/// alpha beta = u^k and alpha + beta = u^k - v^k + 1.
AlphaBetaDerivs alpha_beta_derivatives(const ModularEquation& eq,
                                       const SingularPoint& pt,
                                       const TowerElement& v1,
                                       const TowerElement& v2);

/// Exact multiplier: square root of
/// (1/d) (beta(1-beta) / (alpha(1-alpha))) (alpha'/beta'), branch fixed by
/// the numeric hint; classifies the result as positive class (m0 = 1/sqrt(d))
/// or alternating class (m0 = sqrt(4d-l)/2d + sqrt(l)/2d i) by exact
/// comparison. Throws UnrecognizedMultiplier if it matches neither form.
TowerElement multiplier_at(const SingularPoint& pt, const AlphaBetaDerivs& ab,
                           long d, int ell, const ComplexBall& numeric_hint,
                           SeriesClass* klass_out);

/// m'_0 / alpha'_0 by logarithmic differentiation of the multiplier identity.
TowerElement m_derivative_ratio(const SingularPoint& pt,
                                const AlphaBetaDerivs& ab,
                                const TowerElement& m0);

/// Exact series parameters (z, a, b) and the rational normal form
/// sum (A n + B) sign^n / M^n = C sqrt(l) / pi. Throws NonRationalSeries if
/// z, or a and b after removing the common sqrt(l), is not rational.
SeriesCertificate series_parameters(const ModularEquation& eq,
                                    const SingularPoint& pt,
                                    const DerivationTrace& trace,
                                    SeriesClass klass);

/// Full pipeline: singular point, implicit derivatives, multiplier (with a
/// numeric branch hint from the hypergeometric ratio), series parameters.
SeriesCertificate derive_series(const ModularEquation& eq, SeriesClass klass);

/// Re-checks a certificate: exact identities (P(u0,v0) = 0, beta0 = 1-alpha0,
/// z = 4 alpha0 beta0, the multiplier identity and its class form, rational
/// form reconstruction), the 20-digit numeric multiplier containment, and the
/// series-to-pi comparison against the arctan reference at `digits` digits.
VerificationReport verify_certificate(const SeriesCertificate& cert,
                                      long digits);

}  // namespace rama
