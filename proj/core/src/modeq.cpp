#include "rama/modeq.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rama {

void PolyUV::add_term(int du, int dv, const TowerElement& c) {
  if (c.is_zero()) return;
  Key k{du, dv};
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int PolyUV::total_degree() const {
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
  return d;
}

bool PolyUV::is_symmetric() const {
  for (const auto& [k, c] : terms_) {
    auto it = terms_.find({k.second, k.first});
    if (it == terms_.end() || !(it->second == c)) return false;
  }
  return true;
}

PolyUV PolyUV::operator+(const PolyUV& o) const {
  PolyUV r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k.first, k.second, c);
  return r;
}

PolyUV PolyUV::operator*(const PolyUV& o) const {
  PolyUV r;
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_)
      r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
  return r;
}

PolyUV PolyUV::operator-() const {
  PolyUV r;
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

PolyUV PolyUV::d_du() const {
  PolyUV r;
  for (const auto& [k, c] : terms_)
    if (k.first > 0)
      r.add_term(k.first - 1, k.second,
                 c * TowerElement::from_int(k.first));
  return r;
}

PolyUV PolyUV::d_dv() const {
  PolyUV r;
  for (const auto& [k, c] : terms_)
    if (k.second > 0)
      r.add_term(k.first, k.second - 1,
                 c * TowerElement::from_int(k.second));
  return r;
}

TowerElement PolyUV::eval(const TowerElement& u, const TowerElement& v) const {
  // memoized powers; degrees are small
  std::map<int, TowerElement> up, vp;
  auto power = [](std::map<int, TowerElement>& memo, const TowerElement& x,
                  int e) -> const TowerElement& {
    auto it = memo.find(e);
    if (it == memo.end()) it = memo.emplace(e, x.pow(e)).first;
    return it->second;
  };
  TowerElement acc;
  for (const auto& [k, c] : terms_)
    acc += c * power(up, u, k.first) * power(vp, v, k.second);
  return acc;
}

int level_for_s(int s) {
  switch (s) {
    case 6: return 1;
    case 4: return 2;
    case 3: return 3;
    case 2: return 4;
    default:
      throw LevelDegreeMismatch("s must be one of {6,4,3,2}, got " +
                                std::to_string(s));
  }
}

TowerElement eval_P(const PolyUV& P, const TowerElement& u,
                    const TowerElement& v) {
  return P.eval(u, v);
}

std::vector<TowerElement> substitute_scaled(const PolyUV& P,
                                            const TowerElement& zeta, int k) {
  if (!(zeta.pow(k) == TowerElement::from_int(1))) throw NotRootOfUnity();
  std::vector<TowerElement> coeffs(
      static_cast<std::size_t>(P.total_degree()) + 1);
  std::map<int, TowerElement> zp;
  for (const auto& [key, c] : P.terms()) {
    auto it = zp.find(key.second);
    if (it == zp.end()) it = zp.emplace(key.second, zeta.pow(key.second)).first;
    coeffs[static_cast<std::size_t>(key.first + key.second)] += c * it->second;
  }
  while (coeffs.size() > 1 && coeffs.back().is_zero()) coeffs.pop_back();
  return coeffs;
}

namespace {

// --- polynomial expression parser ------------------------------------------

struct PolyLexer {
  const std::string& s;
  std::size_t pos;
  std::size_t base;  // offset of s within the enclosing file

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, base + pos);
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  mpz_class integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (start == pos) fail("integer expected");
    return mpz_class(s.substr(start, pos - start));
  }
};

PolyUV poly_pow(const PolyUV& p, long e) {
  PolyUV acc;
  acc.add_term(0, 0, TowerElement::from_int(1));
  for (long i = 0; i < e; ++i) acc = acc * p;
  return acc;
}

PolyUV parse_expr(PolyLexer& lx);

PolyUV parse_primary(PolyLexer& lx) {
  lx.skip_ws();
  PolyUV p;
  if (lx.eat('(')) {
    p = parse_expr(lx);
    if (!lx.eat(')')) lx.fail("')' expected");
    return p;
  }
  char c = lx.peek();
  if (c == 's') {
    if (lx.s.compare(lx.pos, 4, "sqrt") != 0) lx.fail("unknown symbol");
    lx.pos += 4;
    if (!lx.eat('(')) lx.fail("'(' expected after sqrt");
    mpz_class n = lx.integer();
    if (!lx.eat(')')) lx.fail("')' expected");
    if (n <= 0) lx.fail("sqrt radicand must be positive");
    p.add_term(0, 0, TowerElement::term(Rational(1), n, false));
    return p;
  }
  if (c == 'u' || c == 'v') {
    ++lx.pos;
    p.add_term(c == 'u' ? 1 : 0, c == 'u' ? 0 : 1, TowerElement::from_int(1));
    return p;
  }
  if (c == 'i') {
    ++lx.pos;
    p.add_term(0, 0, TowerElement::imaginary_unit());
    return p;
  }
  if (std::isdigit(static_cast<unsigned char>(c))) {
    mpz_class num = lx.integer();
    if (lx.eat('/')) {
      mpz_class den = lx.integer();
      if (den == 0) lx.fail("zero denominator");
      p.add_term(0, 0,
                 TowerElement::from_rational(Rational(num) / Rational(den)));
    } else {
      p.add_term(0, 0, TowerElement::from_rational(Rational(num)));
    }
    return p;
  }
  lx.fail("number, sqrt, u, v or '(' expected");
}

PolyUV parse_factor(PolyLexer& lx) {
  PolyUV p = parse_primary(lx);
  if (lx.eat('^')) {
    mpz_class e = lx.integer();
    if (e < 0 || e > 64) lx.fail("exponent out of range");
    p = poly_pow(p, e.get_si());
  }
  return p;
}

PolyUV parse_term(PolyLexer& lx) {
  PolyUV p = parse_factor(lx);
  while (lx.eat('*')) p = p * parse_factor(lx);
  return p;
}

PolyUV parse_expr(PolyLexer& lx) {
  PolyUV acc;
  int sign = 1;
  if (lx.eat('-'))
    sign = -1;
  else
    lx.eat('+');
  for (;;) {
    PolyUV t = parse_term(lx);
    acc = acc + (sign < 0 ? -t : t);
    lx.skip_ws();
    if (lx.eat('+'))
      sign = 1;
    else if (lx.eat('-'))
      sign = -1;
    else
      break;
  }
  return acc;
}

// --- header key-value parsing ----------------------------------------------

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

int parse_int_field(const std::string& v, const std::string& key,
                    std::size_t pos) {
  try {
    std::size_t used = 0;
    int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw SyntaxError("invalid integer for key '" + key + "': " + v, pos);
  }
}

std::string render_coeff_factors(const Rational& mag, const mpz_class& radicand,
                                 bool imag, bool has_uv) {
  std::vector<std::string> fs;
  if (mag != 1 || (radicand == 1 && !imag && !has_uv)) {
    std::string r = mag.get_num().get_str();
    if (mag.get_den() != 1) r += "/" + mag.get_den().get_str();
    fs.push_back(r);
  }
  if (radicand != 1) fs.push_back("sqrt(" + radicand.get_str() + ")");
  if (imag) fs.push_back("i");
  std::string out;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    if (j) out += "*";
    out += fs[j];
  }
  return out;
}

}  // namespace

ModularEquation parse_equation(const std::string& source_text) {
  std::map<std::string, std::pair<std::string, std::size_t>> fields;
  std::size_t poly_offset = 0;
  std::size_t line_start = 0;
  while (line_start < source_text.size()) {
    std::size_t eol = source_text.find('\n', line_start);
    if (eol == std::string::npos) eol = source_text.size();
    std::string line = source_text.substr(line_start, eol - line_start);
    std::string t = trim(line);
    if (!t.empty() && t[0] != '#') {
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw SyntaxError("expected 'key = value'", line_start);
      std::string key = trim(line.substr(0, eq));
      std::string val = trim(line.substr(eq + 1));
      if (key == "poly") {
        // quoted, may span lines
        std::size_t q1 = source_text.find('"', line_start + eq);
        if (q1 == std::string::npos)
          throw SyntaxError("poly value must be quoted", line_start + eq);
        std::size_t q2 = source_text.find('"', q1 + 1);
        if (q2 == std::string::npos)
          throw SyntaxError("unterminated poly string", q1);
        fields["poly"] = {source_text.substr(q1 + 1, q2 - q1 - 1), q1 + 1};
        poly_offset = q1 + 1;
        line_start = source_text.find('\n', q2);
        if (line_start == std::string::npos) break;
        ++line_start;
        continue;
      }
      fields[key] = {val, line_start};
    }
    line_start = eol + 1;
  }

  for (const char* key : {"name", "level", "s", "degree", "k", "poly"})
    if (!fields.count(key))
      throw SyntaxError(std::string("missing key '") + key + "'", 0);

  ModularEquation eq;
  eq.name = fields["name"].first;
  eq.level = parse_int_field(fields["level"].first, "level",
                             fields["level"].second);
  eq.s = parse_int_field(fields["s"].first, "s", fields["s"].second);
  eq.degree = parse_int_field(fields["degree"].first, "degree",
                              fields["degree"].second);
  eq.k = parse_int_field(fields["k"].first, "k", fields["k"].second);
  if (level_for_s(eq.s) != eq.level)
    throw LevelDegreeMismatch(eq.name + ": level " + std::to_string(eq.level) +
                              " does not match s = " + std::to_string(eq.s));
  if (eq.degree < 2)
    throw LevelDegreeMismatch(eq.name + ": degree must be >= 2");
  if (eq.k <= 0) throw SyntaxError("k must be positive", fields["k"].second);

  PolyLexer lx{fields["poly"].first, 0, poly_offset};
  eq.poly = parse_expr(lx);
  lx.skip_ws();
  if (lx.pos != lx.s.size()) lx.fail("trailing input after polynomial");
  if (!eq.poly.is_symmetric()) throw AsymmetricPolynomial(eq.name);
  return eq;
}

std::string render(const ModularEquation& eq) {
  std::ostringstream os;
  os << "name = " << eq.name << "\n";
  os << "level = " << eq.level << "\n";
  os << "s = " << eq.s << "\n";
  os << "degree = " << eq.degree << "\n";
  os << "k = " << eq.k << "\n";
  os << "poly = \"";
  std::vector<PolyUV::Key> keys;
  for (const auto& [k, c] : eq.poly.terms()) keys.push_back(k);
  std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
    int da = a.first + a.second, db = b.first + b.second;
    if (da != db) return da > db;
    return a.first > b.first;
  });
  bool first = true;
  for (const auto& key : keys) {
    const TowerElement& c = eq.poly.terms().at(key);
    bool has_uv = key.first > 0 || key.second > 0;
    std::string body;
    bool negative = false;
    if (c.term_count() == 1) {
      const auto& [mono, q] = *c.terms().begin();
      negative = q < 0;
      body = render_coeff_factors(abs(q), mono.radicand, mono.imag, has_uv);
    } else {
      body = "(" + c.to_string() + ")";
    }
    std::string uv;
    if (key.first == 1)
      uv = "u";
    else if (key.first > 1)
      uv = "u^" + std::to_string(key.first);
    if (key.second >= 1) {
      if (!uv.empty()) uv += "*";
      uv += key.second == 1 ? "v" : "v^" + std::to_string(key.second);
    }
    std::string term = body;
    if (!uv.empty()) term = body.empty() ? uv : body + "*" + uv;
    if (first) {
      if (negative) os << "-";
      first = false;
    } else {
      os << (negative ? " - " : " + ");
    }
    os << term;
  }
  if (first) os << "0";
  os << "\"\n";
  return os.str();
}

std::vector<ModularEquation> registry_load(const std::string& path) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(path))
    throw Error("registry directory not found: " + path);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path))
    if (entry.is_regular_file() && entry.path().extension() == ".modeq")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<ModularEquation> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      out.push_back(parse_equation(ss.str()));
    } catch (const Error& e) {
      throw Error(f.string() + ": " + e.what());
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

}  // namespace rama
