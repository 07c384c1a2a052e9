#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rama/exactnum.hpp"

namespace rama {

/// Bivariate polynomial in u, v with tower coefficients.
class PolyUV {
 public:
  using Key = std::pair<int, int>;  // (deg_u, deg_v)

  void add_term(int du, int dv, const TowerElement& c);
  const std::map<Key, TowerElement>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  bool is_symmetric() const;

  PolyUV operator+(const PolyUV& o) const;
  PolyUV operator*(const PolyUV& o) const;
  PolyUV operator-() const;

  PolyUV d_du() const;
  PolyUV d_dv() const;

  TowerElement eval(const TowerElement& u, const TowerElement& v) const;

 private:
  std::map<Key, TowerElement> terms_;
};

/// A modular equation u^k = alpha*beta, v^k = (1-alpha)(1-beta), P(u,v) = 0.
struct ModularEquation {
  std::string name;
  int level = 0;   // l in {1,2,3,4}
  int s = 0;       // s in {6,4,3,2}, l = 4 sin^2(pi/s)
  int degree = 0;  // d
  int k = 0;       // exponent
  PolyUV poly;
};

/// Level for a given hypergeometric family parameter s, per l = 4 sin^2(pi/s).
int level_for_s(int s);

ModularEquation parse_equation(const std::string& source_text);
/// Canonical text form; byte-stable: render(parse(render(x))) == render(x).
std::string render(const ModularEquation& eq);

/// P(u, zeta*u) collected by powers of u. zeta^k must equal 1 exactly.
std::vector<TowerElement> substitute_scaled(const PolyUV& P,
                                            const TowerElement& zeta, int k);

TowerElement eval_P(const PolyUV& P, const TowerElement& u,
                    const TowerElement& v);

/// Parse every *.modeq file in a directory, stable ordering by name.
std::vector<ModularEquation> registry_load(const std::string& path);

}  // namespace rama
