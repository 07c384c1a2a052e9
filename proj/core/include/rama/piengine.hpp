#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rama/certificate.hpp"

namespace rama {

/// Binary-splitting triple for a weighted hypergeometric partial sum over
/// [n1, n2): P and Q are the term-product numerator and denominator, T the
/// weighted sum with the (A n + B) factor folded in, so that
/// sum_{n=n1}^{n2-1} (A n + B) t_n / t_{n1} = T / Q.
struct SummationState {
  mpz_class P, Q, T;
};

/// t_{n+1}/t_n of the unweighted term: z (2n+1)(sn+1)(sn+s-1) / (2 s^2 (n+1)^3).
Rational term_ratio(const SeriesCertificate& cert, long n);

/// Exact divide-and-conquer evaluation; requires 0 <= n1 < n2. The merge is
/// associative, so the result is independent of split order; large ranges are
/// evaluated in parallel near the root of the tree.
SummationState binsplit(const SeriesCertificate& cert, long n1, long n2);

/// Associative merge of adjacent ranges.
SummationState combine(const SummationState& left, const SummationState& right);

/// pi truncated to D decimal places, as "3." followed by D digits. Every
/// digit is certified by the geometric tail bound plus integer bracketing of
/// C sqrt(ell) / S; if `certified` is given it receives the certified digit
/// count (>= D on success). Throws UncertifiedDigits if a retry with 10%
/// more terms still cannot guarantee D digits.
std::string pi_digits(const SeriesCertificate& cert, long digits,
                      long* certified = nullptr);

/// Independent reference: pi from 16 arctan(1/5) - 4 arctan(1/239) summed in
/// integer arithmetic. Same output format as pi_digits.
std::string machin_pi(long digits);

/// Wraps a digit string into 80-column lines with a trailing newline.
std::string format_digits(const std::string& digits);

struct ConvergenceRow {
  std::string name;
  int level = 0;
  Rational z;
  double digits_per_term = 0;
  long terms_for_1000 = 0;
  double wall_seconds = 0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  /// Name of the level-3 row with the most digits per term, if any
  /// level-3 certificates were supplied. Rows of other levels never
  /// participate in the ranking.
  std::optional<std::string> fastest_level3;
};

/// Measures convergence of each certificate (timing a 1000-digit run) and
/// ranks the level-3 entries by digits per term.
ConvergenceReport convergence_report(const std::vector<SeriesCertificate>& certs);

std::string render_table(const ConvergenceReport& report);
std::string render_json(const ConvergenceReport& report);

}  // namespace rama
