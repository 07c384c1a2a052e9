#pragma once

// Shared helpers for the test suites: seeded random tower elements, registry
// access, and one-time cached derivations (so several test cases can share a
// certificate without re-running the pipeline).

#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rama/derive.hpp"
#include "rama/exactnum.hpp"
#include "rama/modeq.hpp"

#ifndef RAMA_DATA_DIR
#define RAMA_DATA_DIR "data/equations"
#endif

namespace testutil {

using rama::Rational;
using rama::TowerElement;

inline Rational random_rational(std::mt19937_64& rng, long range = 40) {
  std::uniform_int_distribution<long> num(-range, range);
  std::uniform_int_distribution<long> den(1, range);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

/// Random element of a tower with at most `max_gens` radical generators
/// (drawn from small squarefree radicands) plus the imaginary unit.
inline TowerElement random_element(std::mt19937_64& rng, int max_gens = 4,
                                   bool allow_imag = true) {
  static const long kRadicands[] = {2, 3, 5, 7, 11, 89};
  std::uniform_int_distribution<int> pick(0, 5);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<long> gens;
  for (int g = 0; g < max_gens; ++g) {
    long r = kRadicands[pick(rng)];
    bool seen = false;
    for (long have : gens) seen = seen || have == r;
    if (!seen) gens.push_back(r);
  }
  TowerElement x;
  // Walk all squarefree products of the chosen generators (incl. 1), with
  // and without i, keeping each with probability 1/2.
  const int subsets = 1 << gens.size();
  for (int mask = 0; mask < subsets; ++mask) {
    mpz_class radicand = 1;
    for (size_t g = 0; g < gens.size(); ++g)
      if (mask & (1 << g)) radicand *= gens[g];
    for (int imag = 0; imag < (allow_imag ? 2 : 1); ++imag) {
      if (coin(rng) == 0) continue;
      x += TowerElement::term(random_rational(rng), radicand, imag == 1);
    }
  }
  return x;
}

inline TowerElement random_nonzero_element(std::mt19937_64& rng,
                                           int max_gens = 4,
                                           bool allow_imag = true) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    TowerElement x = random_element(rng, max_gens, allow_imag);
    if (!x.is_zero()) return x;
  }
  return TowerElement::from_int(1);
}

inline const std::vector<rama::ModularEquation>& registry() {
  static const std::vector<rama::ModularEquation> reg =
      rama::registry_load(RAMA_DATA_DIR);
  return reg;
}

inline const rama::ModularEquation& equation(const std::string& name) {
  for (const auto& eq : registry())
    if (eq.name == name) return eq;
  throw std::runtime_error("equation not in registry: " + name);
}

/// The five registry derivations, each run at most once per process.
inline const rama::SeriesCertificate& cached_cert(const std::string& name,
                                                  rama::SeriesClass klass) {
  static std::map<std::string, rama::SeriesCertificate> cache;
  const std::string key = name + "/" + rama::to_string(klass);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, rama::derive_series(equation(name), klass)).first;
  return it->second;
}

struct Target {
  const char* name;
  rama::SeriesClass klass;
};

/// All derivation targets covered by the registry.
inline const std::vector<Target>& all_targets() {
  static const std::vector<Target> targets = {
      {"chan-liaw-3-23", rama::SeriesClass::alternating},
      {"berndt-2-7", rama::SeriesClass::alternating},
      {"berndt-3-11", rama::SeriesClass::alternating},
      {"berndt-3-5", rama::SeriesClass::positive},
      {"berndt-3-5", rama::SeriesClass::alternating},
  };
  return targets;
}

}  // namespace testutil
