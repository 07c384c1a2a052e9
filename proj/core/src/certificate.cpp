#include "rama/certificate.hpp"

#include <sstream>

#include "rama/errors.hpp"

namespace rama {

std::string to_string(SeriesClass c) {
  return c == SeriesClass::positive ? "positive" : "alternating";
}

SeriesClass series_class_from_string(const std::string& s) {
  if (s == "positive") return SeriesClass::positive;
  if (s == "alternating") return SeriesClass::alternating;
  throw Error("unknown series class: " + s);
}

bool VerificationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

// M rendered as b^(e n) when M is a perfect power, M^n for other integers,
// (p/q)^n otherwise.
std::string power_display(const Rational& M) {
  if (M.get_den() == 1) {
    const mpz_class& m = M.get_num();
    for (unsigned long e = mpz_sizeinbase(m.get_mpz_t(), 2); e >= 2; --e) {
      mpz_class root;
      if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), e) != 0)
        return root.get_str() + "^(" + std::to_string(e) + " n)";
    }
    return m.get_str() + "^n";
  }
  return "(" + M.get_str() + ")^n";
}

}  // namespace

std::string display_identity(const SeriesCertificate& cert) {
  const RationalForm& rf = cert.rational_form;
  std::ostringstream os;
  os << "sum_{n>=0} (1/2)_n (1/" << cert.s << ")_n (1-1/" << cert.s
     << ")_n / (1)_n^3 (" << rf.A.get_str() << " n + " << rf.B.get_str()
     << ") ";
  if (rf.sign < 0) os << "(-1)^n ";
  os << "/ " << power_display(rf.M) << " = " << rf.C.get_str();
  if (rf.level_radical) os << " sqrt(" << cert.ell << ")";
  os << "/pi";
  return os.str();
}

}  // namespace rama
