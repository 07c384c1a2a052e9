#pragma once

#include <gmpxx.h>

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "rama/ball.hpp"
#include "rama/errors.hpp"

namespace rama {

/// Exact rational; GMP keeps it canonical (gcd 1, positive denominator).
using Rational = mpq_class;

/// n = squarefree * square^2 for positive n. Returns the squarefree part and
/// writes the square root of the square part.
mpz_class squarefree_part(const mpz_class& n, mpz_class& square_root_out);

/// Distinct prime factors of a squarefree positive integer.
std::vector<mpz_class> prime_factors(const mpz_class& n);

/// Basis monomial of a quadratic radical tower: sqrt(radicand) * i^imag,
/// radicand a squarefree positive integer (1 = no radical).
struct Monomial {
  mpz_class radicand{1};
  bool imag = false;

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.imag == b.imag && a.radicand == b.radicand;
  }
  friend bool operator<(const Monomial& a, const Monomial& b) {
    if (a.imag != b.imag) return !a.imag;
    return a.radicand < b.radicand;
  }
};

/// Exact element of Q(i, sqrt(r1), ..., sqrt(rm)): a finite sum of terms
/// q * sqrt(m) * i^e with rational q and squarefree radicand m. The map form
/// is canonical, so equality is structural.
class TowerElement {
 public:
  TowerElement() = default;  // zero

  static TowerElement from_rational(const Rational& q);
  static TowerElement from_int(long n);
  static TowerElement imaginary_unit();
  /// sqrt(n) for a positive integer n, radicand normalized squarefree.
  static TowerElement radical(const mpz_class& n);
  static TowerElement term(const Rational& coeff, const mpz_class& radicand,
                           bool imag);

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  bool is_real() const;
  Rational rational_value() const;  // requires is_rational()
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  /// Coefficient of a basis monomial (zero if absent).
  Rational coefficient(const mpz_class& radicand, bool imag) const;
  /// Distinct radicands > 1 appearing in the element.
  std::vector<mpz_class> radicands() const;

  TowerElement real_part() const;
  TowerElement imag_part() const;  // Y for x = X + Y*i, as a real element
  TowerElement conjugate() const;  // i -> -i

  TowerElement operator-() const;
  friend TowerElement operator+(const TowerElement& a, const TowerElement& b);
  friend TowerElement operator-(const TowerElement& a, const TowerElement& b);
  friend TowerElement operator*(const TowerElement& a, const TowerElement& b);
  friend TowerElement operator/(const TowerElement& a, const TowerElement& b);
  TowerElement& operator+=(const TowerElement& b);
  TowerElement& operator-=(const TowerElement& b);
  TowerElement& operator*=(const TowerElement& b);

  TowerElement inv() const;
  TowerElement pow(long n) const;

  friend bool operator==(const TowerElement& a, const TowerElement& b) {
    return a.terms_ == b.terms_;
  }

  /// Ball certified to contain the exact value.
  ComplexBall to_ball(mpfr_prec_t precision_bits) const;

  /// Normalized text form: signed sum of `p/q*sqrt(r)*i` terms sorted by
  /// monomial; round-trips bit-exactly through parse().
  std::string to_string() const;
  static TowerElement parse(const std::string& text);

 private:
  void add_term(const Monomial& m, const Rational& q);
  std::map<Monomial, Rational> terms_;
};

/// Exact sign of a real element (ball refinement; exact zero test first).
int sign_real(const TowerElement& x);

/// Exact square root within the quadratic tower class. Returns y with
/// y*y == x; among the two roots, the one on branch_hint's side.
/// Throws NotRepresentable when the root needs a radical outside the
/// searched denesting space.
TowerElement sqrt(const TowerElement& x, const ComplexBall& branch_hint);

/// Does the ball intersect a ball evaluation of x (combined radii)?
bool contains(const ComplexBall& b, const TowerElement& x);

}  // namespace rama
