// Acceptance runner: executes the eight top-level checks end to end and
// prints exactly one PASS/FAIL line per criterion. Exits nonzero when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fd_oracle.hpp"
#include "rama/derive.hpp"
#include "rama/hyper.hpp"
#include "rama/identify.hpp"
#include "rama/piengine.hpp"
#include "test_util.hpp"

using rama::ComplexBall;
using rama::Rational;
using rama::SeriesCertificate;
using rama::SeriesClass;
using rama::TowerElement;
using testutil::cached_cert;
using testutil::equation;

namespace {

int failures = 0;

void report(int criterion, const char* name, bool pass,
            const std::string& detail = "") {
  printf("%s criterion-%d %s%s%s\n", pass ? "PASS" : "FAIL", criterion, name,
         detail.empty() ? "" : ": ", detail.c_str());
  fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

TowerElement q(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return TowerElement::from_rational(r);
}

TowerElement rad(long n) { return TowerElement::radical(n); }
const TowerElement i_unit = TowerElement::imaginary_unit();

// ---- criterion 1: exact reproduction of the degree-23 derivation ----------
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  const SeriesCertificate& cert =
      cached_cert("chan-liaw-3-23", SeriesClass::alternating);
  double elapsed = seconds_since(t0);
  bool ok = true;
  ok &= cert.point.alpha0 == q(1, 2) - q(53, 1000) * rad(89);
  ok &= cert.trace.v1 ==
        (-q(294573, 1) * rad(3) + q(82573, 1) * i_unit) / q(516854, 1);
  ok &= cert.trace.v2 ==
        (q(8674041040500000, 1) * rad(5) * (q(1, 1) - i_unit) +
         q(3034180783431000, 1) * rad(15) * (q(1, 1) + i_unit)) /
            q(17258921684500483, 1);
  ok &= cert.trace.m0 == rad(89) * q(1, 46) + rad(3) * q(1, 46) * i_unit;
  ok &= cert.trace.m_ratio == q(827000, 69);
  ok &= cert.z == q(-1, 250000);
  ok &= cert.b == q(4717, 1500) * rad(3);
  ok &= cert.a == q(827, 4500) * rad(3);
  ok &= cert.rational_form.A == 14151 && cert.rational_form.B == 827 &&
        cert.rational_form.sign == -1 && cert.rational_form.M == 250000 &&
        cert.rational_form.C == 1500 && cert.rational_form.level_radical;
  char buf[64];
  snprintf(buf, sizeof buf, "derived in %.1f s", elapsed);
  report(1, "exact-degree-23-derivation", ok, buf);
}

// ---- criterion 2: numeric identification of the multiplier ----------------
void criterion2() {
  TowerElement alpha0 = q(1, 2) - q(53, 1000) * rad(89);
  TowerElement beta0 = TowerElement::from_int(1) - alpha0;
  ComplexBall m =
      rama::multiplier_numeric(rama::HyperParams{3}, alpha0, beta0, 80);
  ComplexBall printed = ComplexBall::from_decimal(
      "0.20508654634905660459", "0.037653278425410375946", 96);
  printed.inflate_2exp(-64);  // the print is truncated to 20 digits
  bool contained =
      rama::overlaps(m, printed) && rama::certified_decimal_digits(m) >= 20;

  rama::IdentifyOptions opts;
  opts.radicands = {3, 89};
  bool identified = false;
  try {
    TowerElement found = rama::identify_decimal(
        "0.20508654634905660459", "0.037653278425410375946", opts);
    identified =
        found == rad(89) * q(1, 46) + rad(3) * q(1, 46) * i_unit;
  } catch (const rama::Error&) {
  }
  report(2, "twenty-digit-multiplier-identification", contained && identified);
}

// ---- criterion 3: 1000-digit verification within budget -------------------
void criterion3() {
  const SeriesCertificate& cert =
      cached_cert("chan-liaw-3-23", SeriesClass::alternating);
  auto t0 = std::chrono::steady_clock::now();
  rama::VerificationReport report_1000 = rama::verify_certificate(cert, 1000);
  double elapsed = seconds_since(t0);
  double dpt = -std::log10(std::fabs(mpq_get_d(cert.rational_form.z().get_mpq_t())));
  long terms = static_cast<long>(std::ceil(1000.0 / dpt)) + 10;
  bool ok = report_1000.all_pass() && terms <= 200 && elapsed < 10.0;
  char buf[96];
  snprintf(buf, sizeof buf, "%ld terms, %.2f s", terms, elapsed);
  report(3, "thousand-digit-verification", ok, buf);
}

// ---- criterion 4: the four companion derivations --------------------------
void criterion4() {
  struct Item {
    const char* name;
    SeriesClass klass;
  };
  const Item items[] = {
      {"berndt-2-7", SeriesClass::alternating},
      {"berndt-3-11", SeriesClass::alternating},
      {"berndt-3-5", SeriesClass::positive},
      {"berndt-3-5", SeriesClass::alternating},
  };
  bool ok = true;
  std::string detail;
  for (const Item& item : items) {
    try {
      const SeriesCertificate& cert = cached_cert(item.name, item.klass);
      rama::VerificationReport rep = rama::verify_certificate(cert, 500);
      bool klass_ok =
          item.klass == SeriesClass::alternating
              ? cert.trace.m0 * cert.trace.m0.conjugate() == q(1, cert.d)
              : cert.trace.m0 * cert.trace.m0 == q(1, cert.d);
      if (!rep.all_pass() || !klass_ok) {
        ok = false;
        detail += std::string(item.name) + " ";
      }
    } catch (const rama::Error& e) {
      ok = false;
      detail += std::string(item.name) + "(" + e.what() + ") ";
    }
  }
  report(4, "companion-derivations-500-digits", ok, detail);
}

// ---- criterion 5: convergence ranking -------------------------------------
void criterion5() {
  std::vector<SeriesCertificate> certs;
  for (const auto& t : testutil::all_targets())
    certs.push_back(cached_cert(t.name, t.klass));
  rama::ConvergenceReport rep = rama::convergence_report(certs);
  bool ok = rep.fastest_level3.has_value() &&
            *rep.fastest_level3 == "chan-liaw-3-23-alternating";
  double flagship_rate = 0;
  for (const auto& row : rep.rows) {
    if (row.name == "chan-liaw-3-23-alternating")
      flagship_rate = row.digits_per_term;
  }
  ok = ok && flagship_rate > 5.3978 && flagship_rate < 5.3980;
  for (const auto& row : rep.rows)
    if (row.level == 3 && row.name != "chan-liaw-3-23-alternating")
      ok = ok && row.digits_per_term < flagship_rate;
  char buf[64];
  snprintf(buf, sizeof buf, "%.4f digits/term", flagship_rate);
  report(5, "fastest-level-3-ranking", ok, buf);
}

// ---- criterion 6: ten-thousand-digit computation --------------------------
void criterion6() {
  const SeriesCertificate& cert =
      cached_cert("chan-liaw-3-23", SeriesClass::alternating);
  auto t0 = std::chrono::steady_clock::now();
  std::string digits = rama::pi_digits(cert, 10000);
  double elapsed = seconds_since(t0);
  std::string reference = rama::machin_pi(10000);
  bool ok = digits == reference && elapsed < 60.0;
  char buf[64];
  snprintf(buf, sizeof buf, "%.2f s", elapsed);
  report(6, "ten-thousand-digits-vs-arctan", ok, buf);
}

// ---- criterion 7: property suites -----------------------------------------
bool props_field_axioms() {
  std::mt19937_64 rng(2026);
  for (int t = 0; t < 10000; ++t) {
    TowerElement x = testutil::random_element(rng, 2);
    TowerElement y = testutil::random_element(rng, 2);
    TowerElement z = testutil::random_element(rng, 2);
    if (!((x + y) + z == x + (y + z))) return false;
    if (!((x * y) * z == x * (y * z))) return false;
    if (!(x * (y + z) == x * y + x * z)) return false;
    if (!(x + (-x)).is_zero()) return false;
  }
  return true;
}

bool props_sqrt_roundtrip() {
  static const long kRads[] = {1, 2, 3, 5, 6, 10, 15};
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> pick(0, 6), coin(0, 1);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
  for (int t = 0; t < 10000; ++t) {
    TowerElement y;
    for (int term = 0; term < 3; ++term) {
      if (coin(rng) && term) continue;
      Rational c(num(rng), den(rng));
      c.canonicalize();
      y += TowerElement::term(c, kRads[pick(rng)], coin(rng) == 1);
    }
    if (y.is_zero()) y = TowerElement::from_int(1);
    TowerElement x = y * y;
    TowerElement r = rama::sqrt(x, y.to_ball(128));
    if (!(r * r == x)) return false;
  }
  return true;
}

bool props_ball_monotone() {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 10000; ++t) {
    TowerElement x = testutil::random_element(rng, 2);
    if (!rama::contains_ball(x.to_ball(80), x.to_ball(160))) return false;
  }
  return true;
}

bool props_hyper_oracles() {
  std::mt19937_64 rng(53);
  // 50 cross-regime points plus 100 AGM-oracle points = 150 evaluations.
  std::uniform_real_distribution<double> band(0.71, 0.90);
  rama::HyperParams p3{3};
  for (int t = 0; t < 50; ++t) {
    Rational qa(static_cast<long>(band(rng) * 1000000), 1000000);
    qa.canonicalize();
    ComplexBall alpha = ComplexBall::from_rational(qa, 256);
    ComplexBall direct =
        rama::gauss_2f1(p3.a(), p3.b(), Rational(1), alpha, 256);
    ComplexBall connected = rama::f_s(p3, alpha, std::nullopt, 256);
    if (!rama::overlaps(direct, connected)) return false;
  }
  std::uniform_real_distribution<double> unif(0.005, 0.945);
  rama::HyperParams p2{2};
  for (int t = 0; t < 100; ++t) {
    Rational qa(static_cast<long>(unif(rng) * 1000000), 1000000);
    qa.canonicalize();
    ComplexBall alpha = ComplexBall::from_rational(qa, 192);
    ComplexBall f = rama::f_s(p2, alpha, std::nullopt, 192);
    ComplexBall one = ComplexBall::from_long(1, 192);
    ComplexBall oracle =
        rama::div(one, rama::agm(one, rama::sqrt(sub(one, alpha))));
    if (!rama::overlaps(f, oracle)) return false;
  }
  return true;
}

bool props_binsplit_naive() {
  for (const auto& t : testutil::all_targets()) {
    const SeriesCertificate& cert = cached_cert(t.name, t.klass);
    Rational sum = 0, term = 1;
    for (long n = 0; n < 50; ++n) {
      sum += Rational(cert.rational_form.A * n + cert.rational_form.B) * term;
      term *= rama::term_ratio(cert, n);
      term.canonicalize();
      rama::SummationState st = rama::binsplit(cert, 0, n + 1);
      Rational v(st.T, st.Q);
      v.canonicalize();
      sum.canonicalize();
      if (v != sum) return false;
    }
  }
  return true;
}

bool props_finite_differences() {
  for (const auto& t : testutil::all_targets()) {
    const SeriesCertificate& cert = cached_cert(t.name, t.klass);
    if (testutil::fd_min_bits(cert) < 25.0) return false;
  }
  return true;
}

void criterion7() {
  std::string failed;
  if (!props_field_axioms()) failed += "field-axioms ";
  if (!props_sqrt_roundtrip()) failed += "sqrt-roundtrip ";
  if (!props_ball_monotone()) failed += "ball-monotonicity ";
  if (!props_hyper_oracles()) failed += "hyper-oracles ";
  if (!props_binsplit_naive()) failed += "binsplit-naive ";
  if (!props_finite_differences()) failed += "finite-differences ";
  report(7, "property-suites", failed.empty(), failed);
}

// ---- criterion 8: tamper detection ----------------------------------------
void criterion8() {
  const SeriesCertificate& good =
      cached_cert("chan-liaw-3-23", SeriesClass::alternating);
  const TowerElement one = TowerElement::from_int(1);
  auto fails_verification = [](const SeriesCertificate& cert) {
    return !rama::verify_certificate(cert, 60).all_pass();
  };
  bool ok = true;
  {
    SeriesCertificate bad = good;
    bad.a = good.a + one;
    ok &= fails_verification(bad);
  }
  {
    SeriesCertificate bad = good;
    bad.b = good.b + one;
    ok &= fails_verification(bad);
  }
  {
    SeriesCertificate bad = good;
    bad.z = good.z + q(1, 1000000);
    ok &= fails_verification(bad);
  }
  {
    SeriesCertificate bad = good;
    bad.trace.m0 = good.trace.m0 + one;
    ok &= fails_verification(bad);
  }
  {
    SeriesCertificate bad = good;
    bad.point.u0 = good.point.u0 + one;
    ok &= fails_verification(bad);
  }
  report(8, "tamper-detection", ok);
}

}  // namespace

int main() {
  try {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
  } catch (const std::exception& e) {
    printf("FAIL unexpected-exception: %s\n", e.what());
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
