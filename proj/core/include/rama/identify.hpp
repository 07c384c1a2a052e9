#pragma once

#include <string>
#include <vector>

#include "rama/ball.hpp"
#include "rama/exactnum.hpp"

namespace rama {

struct IdentifyOptions {
  std::vector<mpz_class> radicands;  // squarefree, e.g. {3, 89}
  mpz_class height = 1000;           // bound on |numerator| and denominator
};

/// Recognizes x as q_0 + sum_j q_j sqrt(r_j) with rational q of height at
/// most `height`, by lattice reduction over (1, sqrt(r_1), ..., x) at the
/// precision of x. Every candidate is re-verified by evaluating the exact
/// element at twice the working precision before it is reported; throws
/// NoMatch rather than returning an unverified guess.
TowerElement identify_real(const Real& x, const IdentifyOptions& opts);

/// Recognizes a complex value given as decimal strings (>= 20 significant
/// digits recommended); real and imaginary parts are identified separately.
TowerElement identify_decimal(const std::string& re, const std::string& im,
                              const IdentifyOptions& opts);

}  // namespace rama
