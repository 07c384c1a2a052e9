#include "rama/exactnum.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace rama {

namespace {

constexpr unsigned long kTrialLimit = 1000000;

void factor_trial(mpz_class n, std::vector<std::pair<mpz_class, unsigned>>& out) {
  auto take = [&](const mpz_class& p) {
    unsigned e = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  };
  take(2);
  take(3);
  for (unsigned long k = 5; k <= kTrialLimit && n > 1; k += 6) {
    if (mpz_class(k) * k > n) break;
    take(k);
    take(k + 2);
  }
  if (n > 1) {
    if (mpz_perfect_square_p(n.get_mpz_t())) {
      mpz_class r;
      mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
      out.emplace_back(r, 2);  // r need not be prime; fine for square folding
    } else if (mpz_probab_prime_p(n.get_mpz_t(), 32)) {
      out.emplace_back(n, 1);
    } else {
      throw NotRepresentable("cannot factor radicand " + n.get_str());
    }
  }
}

}  // namespace

mpz_class squarefree_part(const mpz_class& n, mpz_class& square_root_out) {
  if (n <= 0) throw Error("squarefree_part: argument must be positive");
  std::vector<std::pair<mpz_class, unsigned>> fac;
  factor_trial(n, fac);
  mpz_class sf = 1;
  square_root_out = 1;
  for (const auto& [p, e] : fac) {
    for (unsigned i = 0; i + 1 < e; i += 2) square_root_out *= p;
    if (e % 2 == 1) sf *= p;
  }
  return sf;
}

std::vector<mpz_class> prime_factors(const mpz_class& n) {
  std::vector<std::pair<mpz_class, unsigned>> fac;
  factor_trial(n, fac);
  std::vector<mpz_class> out;
  for (const auto& [p, e] : fac) out.push_back(p);
  return out;
}

void TowerElement::add_term(const Monomial& m, const Rational& q) {
  // Callers may pass a two-argument-constructed mpq that is not in lowest
  // terms; canonicalize here so stored coefficients always compare exactly.
  Rational qq = q;
  qq.canonicalize();
  if (qq == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, qq);
  } else {
    it->second += qq;
    if (it->second == 0) terms_.erase(it);
  }
}

TowerElement TowerElement::from_rational(const Rational& q) {
  TowerElement x;
  x.add_term(Monomial{}, q);
  return x;
}

TowerElement TowerElement::from_int(long n) {
  return from_rational(Rational(n));
}

TowerElement TowerElement::imaginary_unit() {
  TowerElement x;
  x.add_term(Monomial{1, true}, Rational(1));
  return x;
}

TowerElement TowerElement::radical(const mpz_class& n) {
  return term(Rational(1), n, false);
}

TowerElement TowerElement::term(const Rational& coeff, const mpz_class& radicand,
                                bool imag) {
  mpz_class sq;
  mpz_class sf = squarefree_part(radicand, sq);
  TowerElement x;
  x.add_term(Monomial{sf, imag}, coeff * Rational(sq));
  return x;
}

bool TowerElement::is_rational() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first == Monomial{};
}

bool TowerElement::is_real() const {
  for (const auto& [m, q] : terms_)
    if (m.imag) return false;
  return true;
}

Rational TowerElement::rational_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_rational()) throw Error("rational_value: element is not rational");
  return terms_.begin()->second;
}

Rational TowerElement::coefficient(const mpz_class& radicand, bool imag) const {
  auto it = terms_.find(Monomial{radicand, imag});
  return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<mpz_class> TowerElement::radicands() const {
  std::vector<mpz_class> out;
  for (const auto& [m, q] : terms_)
    if (m.radicand > 1 &&
        std::find(out.begin(), out.end(), m.radicand) == out.end())
      out.push_back(m.radicand);
  return out;
}

TowerElement TowerElement::real_part() const {
  TowerElement x;
  for (const auto& [m, q] : terms_)
    if (!m.imag) x.terms_.emplace(m, q);
  return x;
}

TowerElement TowerElement::imag_part() const {
  TowerElement x;
  for (const auto& [m, q] : terms_)
    if (m.imag) x.terms_.emplace(Monomial{m.radicand, false}, q);
  return x;
}

TowerElement TowerElement::conjugate() const {
  TowerElement x;
  for (const auto& [m, q] : terms_)
    x.terms_.emplace(m, m.imag ? Rational(-q) : q);
  return x;
}

TowerElement TowerElement::operator-() const {
  TowerElement x;
  for (const auto& [m, q] : terms_) x.terms_.emplace(m, Rational(-q));
  return x;
}

TowerElement operator+(const TowerElement& a, const TowerElement& b) {
  TowerElement x = a;
  for (const auto& [m, q] : b.terms_) x.add_term(m, q);
  return x;
}

TowerElement operator-(const TowerElement& a, const TowerElement& b) {
  return a + (-b);
}

TowerElement operator*(const TowerElement& a, const TowerElement& b) {
  TowerElement x;
  for (const auto& [ma, qa] : a.terms_) {
    for (const auto& [mb, qb] : b.terms_) {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), ma.radicand.get_mpz_t(), mb.radicand.get_mpz_t());
      Monomial m;
      m.radicand = (ma.radicand / g) * (mb.radicand / g);
      m.imag = ma.imag != mb.imag;
      Rational q = qa * qb * Rational(g);
      if (ma.imag && mb.imag) q = -q;  // i*i = -1
      x.add_term(m, q);
    }
  }
  return x;
}

TowerElement& TowerElement::operator+=(const TowerElement& b) {
  for (const auto& [m, q] : b.terms_) add_term(m, q);
  return *this;
}

TowerElement& TowerElement::operator-=(const TowerElement& b) {
  return *this += (-b);
}

TowerElement& TowerElement::operator*=(const TowerElement& b) {
  *this = *this * b;
  return *this;
}

TowerElement TowerElement::inv() const {
  if (is_zero()) throw DivisionByZero();
  if (is_rational()) {
    Rational q = rational_value();
    return from_rational(1 / q);
  }
  // Rationalize by conjugation: complex conjugation first, then one prime of
  // the radicand support at a time. Each product is fixed by the conjugation,
  // so the recursion strictly shrinks the support.
  TowerElement sigma;
  if (!is_real()) {
    sigma = conjugate();
  } else {
    mpz_class p;
    for (const auto& [m, q] : terms_) {
      if (m.radicand > 1) {
        p = prime_factors(m.radicand).front();
        break;
      }
    }
    for (const auto& [m, q] : terms_) {
      bool flip = mpz_divisible_p(m.radicand.get_mpz_t(), p.get_mpz_t());
      sigma.terms_.emplace(m, flip ? Rational(-q) : q);
    }
  }
  TowerElement norm = *this * sigma;
  return sigma * norm.inv();
}

TowerElement operator/(const TowerElement& a, const TowerElement& b) {
  return a * b.inv();
}

TowerElement TowerElement::pow(long n) const {
  if (n < 0) return inv().pow(-n);
  TowerElement acc = from_int(1);
  TowerElement base = *this;
  unsigned long e = static_cast<unsigned long>(n);
  while (e > 0) {
    if (e & 1) acc *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return acc;
}

ComplexBall TowerElement::to_ball(mpfr_prec_t precision_bits) const {
  const mpfr_prec_t wp = precision_bits + 32;
  ComplexBall acc(wp);
  for (const auto& [m, q] : terms_) {
    ComplexBall t =
        (m.radicand == 1)
            ? ComplexBall::from_rational(q, wp)
            : mul_rational(ComplexBall::sqrt_positive_integer(m.radicand, wp),
                           q);
    if (m.imag) t = mul_i(t);
    acc = add(acc, t);
  }
  return acc;
}

int sign_real(const TowerElement& x) {
  if (!x.is_real()) throw Error("sign_real: element is not real");
  if (x.is_zero()) return 0;
  for (mpfr_prec_t p = 64; p <= (mpfr_prec_t{1} << 20); p *= 2) {
    int s = certified_sign_real(x.to_ball(p));
    if (s != 0) return s;
  }
  throw Error("sign_real: could not separate from zero");
}

namespace {

// Divide every monomial's radicand by p (each must be divisible).
TowerElement strip_radical(const TowerElement& e, const mpz_class& p) {
  TowerElement out;
  for (const auto& [m, q] : e.terms()) {
    out += TowerElement::term(q, m.radicand / p, false);
  }
  return out;
}

// Positive square root of a nonnegative real element, if it exists in the
// quadratic tower class (the g + h*sqrt(p) denesting ansatz, recursively).
std::optional<TowerElement> sqrt_real(const TowerElement& x, int depth = 0) {
  // The denesting ansatz can cycle (the norm step may introduce a radicand
  // that a deeper call eliminates again); genuine denestings bottom out in a
  // few levels, so anything deeper is treated as non-representable.
  if (depth > 6) return std::nullopt;
  if (x.is_zero()) return TowerElement();
  if (x.is_rational()) {
    Rational q = x.rational_value();
    if (q < 0) return std::nullopt;
    mpz_class pq = q.get_num() * q.get_den();
    mpz_class sq;
    mpz_class sf = squarefree_part(pq, sq);
    // sqrt(p/q) = sqrt(p*q)/q = sq*sqrt(sf)/q
    return TowerElement::term(Rational(sq) / Rational(q.get_den()), sf, false);
  }
  // pick the smallest prime in the radicand support
  mpz_class p;
  bool have = false;
  for (const auto& [m, q] : x.terms()) {
    if (m.radicand > 1) {
      for (const auto& f : prime_factors(m.radicand))
        if (!have || f < p) {
          p = f;
          have = true;
        }
    }
  }
  // split x = E0 + E1*sqrt(p), both p-free
  TowerElement e0, e1raw;
  for (const auto& [m, q] : x.terms()) {
    if (mpz_divisible_p(m.radicand.get_mpz_t(), p.get_mpz_t()))
      e1raw += TowerElement::term(q, m.radicand, false);
    else
      e0 += TowerElement::term(q, m.radicand, false);
  }
  TowerElement e1 = strip_radical(e1raw, p);
  TowerElement pp = TowerElement::from_rational(Rational(p));
  // norm n = E0^2 - p E1^2; if x = (g + h sqrt(p))^2 then
  // g^2, p h^2 = (E0 +- sqrt(n))/2
  TowerElement n = e0 * e0 - pp * e1 * e1;
  if (!n.is_real()) return std::nullopt;
  if (sign_real(n) < 0) return std::nullopt;
  auto sn = sqrt_real(n, depth + 1);
  if (!sn) return std::nullopt;
  const Rational half(1, 2);
  for (int flip = 0; flip < 2; ++flip) {
    TowerElement s = flip ? -(*sn) : *sn;
    TowerElement c1 = (e0 + s) * TowerElement::from_rational(half);
    if (!c1.is_real() || sign_real(c1) <= 0) continue;
    auto g = sqrt_real(c1, depth + 1);
    if (!g) continue;
    TowerElement h = e1 * (TowerElement::from_int(2) * (*g)).inv();
    // re-attach sqrt(p)
    TowerElement hsp;
    for (const auto& [m, q] : h.terms())
      hsp += TowerElement::term(q, m.radicand * p, false);
    TowerElement y = *g + hsp;
    if (y * y == x) {
      if (sign_real(y) < 0) y = -y;
      return y;
    }
  }
  return std::nullopt;
}

}  // namespace

TowerElement sqrt(const TowerElement& x, const ComplexBall& branch_hint) {
  if (x.is_zero()) return TowerElement();
  TowerElement X = x.real_part();
  TowerElement Y = x.imag_part();
  TowerElement y;
  if (Y.is_zero()) {
    int s = sign_real(X);
    if (s > 0) {
      auto r = sqrt_real(X);
      if (!r) throw NotRepresentable("sqrt of " + x.to_string());
      y = *r;
    } else {
      auto r = sqrt_real(-X);
      if (!r) throw NotRepresentable("sqrt of " + x.to_string());
      y = TowerElement::imaginary_unit() * (*r);
    }
  } else {
    // sqrt(X + Y i) = g + d i with g^2 = (|x| + X)/2, d = Y/(2g)
    TowerElement h2 = X * X + Y * Y;
    auto habs = sqrt_real(h2);
    if (!habs) throw NotRepresentable("|.| of " + x.to_string());
    const Rational half(1, 2);
    bool done = false;
    TowerElement c1 = (*habs + X) * TowerElement::from_rational(half);
    if (sign_real(c1) > 0) {
      if (auto g = sqrt_real(c1)) {
        TowerElement d = Y * (TowerElement::from_int(2) * (*g)).inv();
        y = *g + TowerElement::imaginary_unit() * d;
        done = (y * y == x);
      }
    }
    if (!done) {
      TowerElement c2 = (*habs - X) * TowerElement::from_rational(half);
      if (sign_real(c2) > 0) {
        if (auto d = sqrt_real(c2)) {
          TowerElement g = Y * (TowerElement::from_int(2) * (*d)).inv();
          y = g + TowerElement::imaginary_unit() * (*d);
          done = (y * y == x);
        }
      }
    }
    if (!done) throw NotRepresentable("sqrt of " + x.to_string());
  }
  // branch selection: root on the hint's side of the origin
  for (mpfr_prec_t p = std::max<mpfr_prec_t>(branch_hint.prec(), 64);
       p <= (mpfr_prec_t{1} << 16); p *= 2) {
    ComplexBall yb = y.to_ball(p);
    Real dot(ComplexBall::kRadiusPrec), t(ComplexBall::kRadiusPrec);
    mpfr_mul(dot.get(), yb.re_mid(), branch_hint.re_mid(), MPFR_RNDN);
    mpfr_mul(t.get(), yb.im_mid(), branch_hint.im_mid(), MPFR_RNDN);
    mpfr_add(dot.get(), dot.get(), t.get(), MPFR_RNDN);
    if (!mpfr_zero_p(dot.get()))
      return mpfr_sgn(dot.get()) > 0 ? y : -y;
  }
  // hint orthogonal to the root line; fall back to a fixed convention
  TowerElement re = y.real_part();
  int s = re.is_zero() ? sign_real(y.imag_part()) : sign_real(re);
  return s >= 0 ? y : -y;
}

bool contains(const ComplexBall& b, const TowerElement& x) {
  return overlaps(b, x.to_ball(b.prec()));
}

std::string TowerElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, q] : terms_) {
    Rational a = abs(q);
    if (first) {
      if (q < 0) os << "-";
      first = false;
    } else {
      os << (q < 0 ? " - " : " + ");
    }
    os << a.get_num().get_str();
    if (a.get_den() != 1) os << "/" << a.get_den().get_str();
    if (m.radicand != 1) os << "*sqrt(" << m.radicand.get_str() << ")";
    if (m.imag) os << "*i";
  }
  return os.str();
}

namespace {

struct ElemLexer {
  const std::string& s;
  std::size_t pos = 0;
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_word(const std::string& w) {
    skip_ws();
    if (s.compare(pos, w.size(), w) == 0) {
      pos += w.size();
      return true;
    }
    return false;
  }
  mpz_class integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (start == pos) throw SyntaxError("integer expected", pos);
    return mpz_class(s.substr(start, pos - start));
  }
  bool at_end() {
    skip_ws();
    return pos >= s.size();
  }
};

TowerElement parse_factor(ElemLexer& lx) {
  lx.skip_ws();
  if (lx.eat_word("sqrt")) {
    if (!lx.eat('(')) throw SyntaxError("'(' expected after sqrt", lx.pos);
    mpz_class n = lx.integer();
    if (!lx.eat(')')) throw SyntaxError("')' expected", lx.pos);
    if (n <= 0) throw SyntaxError("sqrt radicand must be positive", lx.pos);
    return TowerElement::term(Rational(1), n, false);
  }
  if (lx.eat('i')) return TowerElement::imaginary_unit();
  mpz_class num = lx.integer();
  if (lx.eat('/')) {
    mpz_class den = lx.integer();
    if (den == 0) throw SyntaxError("zero denominator", lx.pos);
    return TowerElement::from_rational(Rational(num) / Rational(den));
  }
  return TowerElement::from_rational(Rational(num));
}

}  // namespace

TowerElement TowerElement::parse(const std::string& text) {
  ElemLexer lx{text};
  TowerElement acc;
  bool first = true;
  while (!lx.at_end()) {
    int sign = 1;
    if (lx.eat('-'))
      sign = -1;
    else if (lx.eat('+')) {
      if (first) throw SyntaxError("unexpected leading '+'", lx.pos);
    } else if (!first) {
      throw SyntaxError("'+' or '-' expected between terms", lx.pos);
    }
    TowerElement t = parse_factor(lx);
    while (lx.eat('*')) t *= parse_factor(lx);
    if (sign < 0) t = -t;
    acc += t;
    first = false;
  }
  if (first) throw SyntaxError("empty element", 0);
  return acc;
}

}  // namespace rama
