#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "doctest.h"
#include "rama/piengine.hpp"
#include "test_util.hpp"

using rama::Rational;
using rama::SeriesCertificate;
using rama::SeriesClass;
using rama::SummationState;
using testutil::all_targets;
using testutil::cached_cert;

namespace {

const SeriesCertificate& flagship() {
  return cached_cert("chan-liaw-3-23", SeriesClass::alternating);
}

// Naive left-fold of sum (A n + B) t_n in exact rationals.
Rational naive_sum(const SeriesCertificate& cert, long N) {
  Rational sum = 0, t = 1;
  for (long n = 0; n < N; ++n) {
    sum += Rational(cert.rational_form.A * n + cert.rational_form.B) * t;
    t *= rama::term_ratio(cert, n);
    t.canonicalize();
  }
  sum.canonicalize();
  return sum;
}

}  // namespace

TEST_CASE("term ratio values and asymptotics") {
  Rational r0 = rama::term_ratio(flagship(), 0);
  CHECK(r0 == Rational(-1, 2250000));

  // The ratio tends to z.
  Rational z = flagship().rational_form.z();
  Rational r_large = rama::term_ratio(flagship(), 1000000);
  Rational rel = r_large / z - 1;
  CHECK(abs(rel) < Rational(1, 100000));

  // |ratio| < |z| for every n (polynomial part < 1): spot-scan.
  for (long n = 0; n < 100; ++n)
    CHECK(abs(rama::term_ratio(flagship(), n)) < abs(z));
}

TEST_CASE("binary splitting equals naive summation") {
  SummationState first = rama::binsplit(flagship(), 0, 1);
  Rational first_value(first.T, first.Q);
  first_value.canonicalize();
  CHECK(first_value == 827);

  for (const auto& t : all_targets()) {
    const SeriesCertificate& cert = cached_cert(t.name, t.klass);
    for (long N : {1L, 2L, 3L, 7L, 20L, 50L}) {
      SummationState st = rama::binsplit(cert, 0, N);
      Rational split_value(st.T, st.Q);
      split_value.canonicalize();
      REQUIRE(split_value == naive_sum(cert, N));
    }
  }
}

TEST_CASE("combine is associative") {
  const SeriesCertificate& cert = flagship();
  SummationState a = rama::binsplit(cert, 0, 3);
  SummationState b = rama::binsplit(cert, 3, 8);
  SummationState c = rama::binsplit(cert, 8, 17);
  SummationState left = rama::combine(rama::combine(a, b), c);
  SummationState right = rama::combine(a, rama::combine(b, c));
  CHECK(left.P == right.P);
  CHECK(left.Q == right.Q);
  CHECK(left.T == right.T);
  SummationState direct = rama::binsplit(cert, 0, 17);
  CHECK(left.T * direct.Q == direct.T * left.Q);
}

TEST_CASE("pi digits match the arctan reference") {
  std::string reference = rama::machin_pi(500);
  CHECK(reference.substr(0, 12) == "3.1415926535");
  for (long D : {50L, 500L}) {
    long certified = 0;
    std::string digits = rama::pi_digits(flagship(), D, &certified);
    REQUIRE(certified >= D);
    REQUIRE(digits == reference.substr(0, static_cast<size_t>(D) + 2));
  }
}

TEST_CASE("independent certificates compute identical digits") {
  std::string a = rama::pi_digits(flagship(), 400);
  std::string b = rama::pi_digits(
      cached_cert("berndt-3-5", SeriesClass::positive), 400);
  std::string c = rama::pi_digits(
      cached_cert("berndt-2-7", SeriesClass::alternating), 400);
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("tail bound is honest against a longer reference sum") {
  // |S - S_N| <= |t_N| (A N + B + A) / (1 - r): compare the bound at N with
  // the value of a much longer (effectively converged) partial sum.
  const SeriesCertificate& cert = flagship();
  const long N = 30;
  SummationState sN = rama::binsplit(cert, 0, N);
  SummationState sFar = rama::binsplit(cert, 0, 400);
  Rational vN(sN.T, sN.Q), vFar(sFar.T, sFar.Q);
  vN.canonicalize();
  vFar.canonicalize();
  Rational r = abs(cert.rational_form.z());
  // t_N <= r^N; bound = r^N (A N + B + A) / (1 - r)
  Rational tN = 1;
  for (long j = 0; j < N; ++j) tN *= r;
  Rational bound = tN *
                   Rational(cert.rational_form.A * N + cert.rational_form.B +
                            cert.rational_form.A) /
                   (Rational(1) - r);
  CHECK(abs(vFar - vN) <= bound);
}

TEST_CASE("digit output formatting") {
  std::string wrapped = rama::format_digits("3." + std::string(200, '1'));
  std::istringstream lines(wrapped);
  std::string line;
  size_t count = 0, maxlen = 0;
  while (std::getline(lines, line)) {
    maxlen = std::max(maxlen, line.size());
    ++count;
  }
  CHECK(maxlen == 80);
  CHECK(count == 3);
  CHECK(wrapped.back() == '\n');
}

TEST_CASE("convergence report ranks the degree-23 series first in level 3") {
  std::vector<SeriesCertificate> certs;
  for (const auto& t : all_targets()) certs.push_back(cached_cert(t.name, t.klass));
  rama::ConvergenceReport report = rama::convergence_report(certs);
  REQUIRE(report.rows.size() == 5);
  REQUIRE(report.fastest_level3.has_value());
  CHECK(*report.fastest_level3 == "chan-liaw-3-23-alternating");
  for (const auto& row : report.rows) {
    if (row.name == "chan-liaw-3-23-alternating") {
      CHECK(row.digits_per_term > 5.39);
      CHECK(row.digits_per_term < 5.40);
      CHECK(row.terms_for_1000 <= 186);
    } else if (row.level == 3) {
      CHECK(row.digits_per_term < 5.39);
    }
  }
  // Rendering round-trips the row count.
  std::string table = rama::render_table(report);
  CHECK(table.find("chan-liaw-3-23-alternating") != std::string::npos);
  std::string json_text = rama::render_json(report);
  CHECK(json_text.find("fastest_level3") != std::string::npos);
}

TEST_CASE("single-row report and level filtering") {
  std::vector<SeriesCertificate> only_level2 = {
      cached_cert("berndt-2-7", SeriesClass::alternating)};
  rama::ConvergenceReport report = rama::convergence_report(only_level2);
  CHECK(report.rows.size() == 1);
  CHECK_FALSE(report.fastest_level3.has_value());
}
