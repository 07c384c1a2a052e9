#include "rama/piengine.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "rama/errors.hpp"

namespace rama {

namespace {

// Numerator/denominator pair of z plus the series shape, cached for the
// splitting recursion.
struct TermScheme {
  long s;
  mpz_class zn, zd;  // z = zn/zd, zd > 0
  mpz_class A, B;
};

TermScheme scheme_for(const SeriesCertificate& cert) {
  Rational z = cert.rational_form.z();
  z.canonicalize();
  if (cert.s < 2) throw Error("certificate has no series parameters");
  return TermScheme{cert.s, z.get_num(), z.get_den(), cert.rational_form.A,
                    cert.rational_form.B};
}

// p(n)/q(n) = t_{n+1}/t_n with the z factor folded in.
mpz_class p_of(const TermScheme& ts, long n) {
  mpz_class p = 2 * n + 1;
  p *= ts.s * n + 1;
  p *= ts.s * n + ts.s - 1;
  return p * ts.zn;
}

mpz_class q_of(const TermScheme& ts, long n) {
  mpz_class q = n + 1;
  q = q * q * q * (2 * ts.s * ts.s);
  return q * ts.zd;
}

SummationState leaf(const TermScheme& ts, long n) {
  SummationState st;
  st.P = p_of(ts, n);
  st.Q = q_of(ts, n);
  st.T = (ts.A * n + ts.B) * st.Q;
  return st;
}

SummationState split(const TermScheme& ts, long n1, long n2, int depth) {
  if (n2 - n1 == 1) return leaf(ts, n1);
  const long mid = n1 + (n2 - n1) / 2;
  if (depth < 3 && n2 - n1 >= 4096) {
    auto right = std::async(std::launch::async, split, std::cref(ts), mid, n2,
                            depth + 1);
    SummationState l = split(ts, n1, mid, depth + 1);
    return combine(l, right.get());
  }
  return combine(split(ts, n1, mid, depth + 1), split(ts, mid, n2, depth + 1));
}

mpz_class pow10(long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}

Rational pow_rational(const Rational& r, long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), r.get_num_mpz_t(),
             static_cast<unsigned long>(e));
  mpz_pow_ui(out.get_den_mpz_t(), r.get_den_mpz_t(),
             static_cast<unsigned long>(e));
  return out;
}

}  // namespace

Rational term_ratio(const SeriesCertificate& cert, long n) {
  TermScheme ts = scheme_for(cert);
  Rational r(p_of(ts, n), q_of(ts, n));
  r.canonicalize();
  return r;
}

SummationState combine(const SummationState& left, const SummationState& right) {
  SummationState st;
  st.P = left.P * right.P;
  st.Q = left.Q * right.Q;
  st.T = left.T * right.Q + left.P * right.T;
  return st;
}

SummationState binsplit(const SeriesCertificate& cert, long n1, long n2) {
  if (n1 < 0 || n1 >= n2) throw Error("binsplit: need 0 <= n1 < n2");
  TermScheme ts = scheme_for(cert);
  return split(ts, n1, n2, 0);
}

std::string pi_digits(const SeriesCertificate& cert, long digits,
                      long* certified) {
  if (digits < 1) throw Error("pi_digits: need digits >= 1");
  const RationalForm& rf = cert.rational_form;
  Rational r = abs(rf.z());
  r.canonicalize();
  // The polynomial part of the term ratio is < 1 for every n, so |z| is a
  // geometric majorant of the term ratios; the tail bound below also needs
  // |z| <= 1/2.
  if (r >= Rational(1, 2))
    throw Error("pi_digits: series does not converge fast enough (|z| >= 1/2)");

  const double dpt = -std::log10(mpq_get_d(r.get_mpq_t()));
  long N = static_cast<long>(std::ceil(digits / dpt)) + 10;

  for (int attempt = 0; attempt < 2; ++attempt, N = N + N / 10 + 1) {
    SummationState st = binsplit(cert, 0, N);
    if (sgn(st.T) <= 0 || sgn(st.Q) <= 0)
      throw Error("pi_digits: partial sum is not positive");

    // |S - T/Q| <= |t_N| (A N + B + A) / (1 - r), |t_N| <= r^N
    Rational tail = pow_rational(r, N) * Rational(rf.A * N + rf.B + rf.A) /
                    (Rational(1) - r);
    tail.canonicalize();

    const long G = digits + 10;  // sqrt guard
    const long F = digits + 5;   // bracket scale
    // pi = C sqrt(ell)/S or C/S depending on the rational form; the radical-
    // free case is the ell = 1 instance of the same bracketing.
    mpz_class lvl = rf.level_radical ? mpz_class(cert.ell) : mpz_class(1);
    mpz_class ell2G = lvl * pow10(2 * G);
    mpz_class X;
    mpz_sqrt(X.get_mpz_t(), ell2G.get_mpz_t());
    if (!(X * X <= ell2G && (X + 1) * (X + 1) > ell2G))
      throw Error("pi_digits: integer square root check failed");

    const mpz_class& Cn = rf.C.get_num();
    const mpz_class& Cd = rf.C.get_den();
    const mpz_class& tn = tail.get_num();
    const mpz_class& td = tail.get_den();

    // pi = Cn sqrt(ell) / (Cd S) with S Q td in [T td - tn Q, T td + tn Q].
    mpz_class den_hi = Cd * (st.T * td + tn * st.Q);
    mpz_class den_lo = Cd * (st.T * td - tn * st.Q);
    if (sgn(den_lo) <= 0) continue;  // tail too large for this N

    mpz_class scale = st.Q * td * pow10(F);
    mpz_class lo = (Cn * X * scale) / (den_hi * pow10(G));
    mpz_class num_hi = Cn * (X + 1) * scale;
    mpz_class den2 = den_lo * pow10(G);
    mpz_class hi = num_hi / den2 + 1;

    std::string slo = lo.get_str();
    std::string shi = hi.get_str();
    if (slo.size() != shi.size() || slo.empty() || slo[0] != '3') continue;
    size_t common = 0;
    while (common < slo.size() && slo[common] == shi[common]) ++common;
    long cert_digits = static_cast<long>(common) - 1;  // drop the leading 3
    if (cert_digits < digits) continue;
    if (certified) *certified = cert_digits;
    return "3." + slo.substr(1, static_cast<size_t>(digits));
  }
  throw UncertifiedDigits("pi_digits: tail bound cannot certify " +
                          std::to_string(digits) + " digits");
}

std::string machin_pi(long digits) {
  if (digits < 1) throw Error("machin_pi: need digits >= 1");
  const long G = digits + 15;
  mpz_class one = pow10(G);
  auto arccot = [&one](unsigned long x) {
    mpz_class sum = 0, t = one / x;
    unsigned long xx = x * x, k = 0;
    while (t != 0) {
      mpz_class c = t / (2 * k + 1);
      sum += (k % 2 ? -c : c);
      t /= xx;
      ++k;
    }
    return sum;
  };
  mpz_class pi = 16 * arccot(5) - 4 * arccot(239);
  std::string s = pi.get_str();  // "31415926..."
  return "3." + s.substr(1, static_cast<size_t>(digits));
}

std::string format_digits(const std::string& digits) {
  std::string out;
  out.reserve(digits.size() + digits.size() / 80 + 2);
  for (size_t i = 0; i < digits.size(); i += 80) {
    out += digits.substr(i, 80);
    out += '\n';
  }
  return out;
}

ConvergenceReport convergence_report(
    const std::vector<SeriesCertificate>& certs) {
  ConvergenceReport report;
  for (const auto& cert : certs) {
    ConvergenceRow row;
    row.name = cert.equation_name + "-" + to_string(cert.klass);
    row.level = cert.ell;
    row.z = cert.rational_form.z();
    row.z.canonicalize();
    row.digits_per_term = -std::log10(std::fabs(mpq_get_d(row.z.get_mpq_t())));
    row.terms_for_1000 =
        static_cast<long>(std::ceil(1000.0 / row.digits_per_term));
    auto t0 = std::chrono::steady_clock::now();
    pi_digits(cert, 1000);
    auto t1 = std::chrono::steady_clock::now();
    row.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    report.rows.push_back(std::move(row));
  }
  const ConvergenceRow* best = nullptr;
  for (const auto& row : report.rows)
    if (row.level == 3 && (!best || row.digits_per_term > best->digits_per_term))
      best = &row;
  if (best) report.fastest_level3 = best->name;
  return report;
}

namespace {

std::string z_string(const Rational& z) {
  return z.get_str();
}

}  // namespace

std::string render_table(const ConvergenceReport& report) {
  std::ostringstream os;
  os << std::left << std::setw(32) << "series" << std::right << std::setw(6)
     << "level" << std::setw(16) << "z" << std::setw(14) << "digits/term"
     << std::setw(14) << "terms(1e3)" << std::setw(12) << "time(s)" << '\n';
  for (const auto& row : report.rows) {
    os << std::left << std::setw(32) << row.name << std::right << std::setw(6)
       << row.level << std::setw(16) << z_string(row.z) << std::setw(14)
       << std::fixed << std::setprecision(4) << row.digits_per_term
       << std::setw(14) << row.terms_for_1000 << std::setw(12)
       << std::setprecision(3) << row.wall_seconds << '\n';
    os.unsetf(std::ios::fixed);
    os << std::setprecision(6);
  }
  if (report.fastest_level3)
    os << "fastest level-3 series: " << *report.fastest_level3 << '\n';
  return os.str();
}

std::string render_json(const ConvergenceReport& report) {
  nlohmann::ordered_json j;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    r["name"] = row.name;
    r["level"] = row.level;
    r["z"] = z_string(row.z);
    r["digits_per_term"] = row.digits_per_term;
    r["terms_for_1000_digits"] = row.terms_for_1000;
    r["wall_seconds"] = row.wall_seconds;
    j["rows"].push_back(std::move(r));
  }
  if (report.fastest_level3)
    j["fastest_level3"] = *report.fastest_level3;
  else
    j["fastest_level3"] = nullptr;
  return j.dump(2) + "\n";
}

}  // namespace rama
