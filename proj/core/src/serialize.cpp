#include "rama/serialize.hpp"

#include <cstdint>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rama/errors.hpp"

namespace rama {

namespace {

using json = nlohmann::ordered_json;

json tower_json(const TowerElement& x) { return x.to_string(); }

TowerElement tower_from(const json& j, const char* field) {
  if (!j.is_string())
    throw Error(std::string("certificate field is not a string: ") + field);
  return TowerElement::parse(j.get<std::string>());
}

std::string int_str(const mpz_class& z) { return z.get_str(); }

mpz_class int_from(const json& j, const char* field) {
  if (!j.is_string())
    throw Error(std::string("certificate field is not a string: ") + field);
  try {
    return mpz_class(j.get<std::string>());
  } catch (const std::invalid_argument&) {
    throw Error(std::string("bad integer in certificate field: ") + field);
  }
}

std::string rat_str(const Rational& q) { return q.get_str(); }

Rational rat_from(const json& j, const char* field) {
  if (!j.is_string())
    throw Error(std::string("certificate field is not a string: ") + field);
  try {
    Rational q(j.get<std::string>());
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw Error(std::string("bad rational in certificate field: ") + field);
  }
}

const json& at(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end())
    throw Error(std::string("certificate is missing field: ") + field);
  return *it;
}

json certificate_json(const SeriesCertificate& cert) {
  json j;
  j["equation_name"] = cert.equation_name;
  j["s"] = cert.s;
  j["ell"] = cert.ell;
  j["d"] = cert.d;
  j["class"] = to_string(cert.klass);
  j["z"] = tower_json(cert.z);
  j["a"] = tower_json(cert.a);
  j["b"] = tower_json(cert.b);
  json rf;
  rf["A"] = int_str(cert.rational_form.A);
  rf["B"] = int_str(cert.rational_form.B);
  rf["sign"] = cert.rational_form.sign;
  rf["M"] = rat_str(cert.rational_form.M);
  rf["C"] = rat_str(cert.rational_form.C);
  rf["level_radical"] = cert.rational_form.level_radical;
  j["rational_form"] = std::move(rf);
  json tr;
  tr["wrt_u"] = cert.trace.wrt_u;
  tr["v1"] = tower_json(cert.trace.v1);
  tr["v2"] = tower_json(cert.trace.v2);
  tr["alpha1"] = tower_json(cert.trace.alpha1);
  tr["beta1"] = tower_json(cert.trace.beta1);
  tr["alpha2"] = tower_json(cert.trace.alpha2);
  tr["beta2"] = tower_json(cert.trace.beta2);
  tr["m0"] = tower_json(cert.trace.m0);
  tr["m_ratio"] = tower_json(cert.trace.m_ratio);
  j["trace"] = std::move(tr);
  json pt;
  pt["u_in_tower"] = cert.point.u_in_tower;
  pt["u0"] = tower_json(cert.point.u0);
  pt["v0"] = tower_json(cert.point.v0);
  pt["zeta"] = tower_json(cert.point.zeta);
  pt["u0sq"] = tower_json(cert.point.u0sq);
  pt["alpha0"] = tower_json(cert.point.alpha0);
  pt["beta0"] = tower_json(cert.point.beta0);
  j["point"] = std::move(pt);
  j["equation_source"] = cert.equation_source;
  return j;
}

SeriesCertificate certificate_from_json(const json& j) {
  if (!j.is_object()) throw Error("certificate is not a JSON object");
  SeriesCertificate cert;
  cert.equation_name = at(j, "equation_name").get<std::string>();
  cert.s = at(j, "s").get<int>();
  cert.ell = at(j, "ell").get<int>();
  cert.d = at(j, "d").get<long>();
  cert.klass = series_class_from_string(at(j, "class").get<std::string>());
  cert.z = tower_from(at(j, "z"), "z");
  cert.a = tower_from(at(j, "a"), "a");
  cert.b = tower_from(at(j, "b"), "b");
  const json& rf = at(j, "rational_form");
  cert.rational_form.A = int_from(at(rf, "A"), "A");
  cert.rational_form.B = int_from(at(rf, "B"), "B");
  cert.rational_form.sign = at(rf, "sign").get<int>();
  if (cert.rational_form.sign != 1 && cert.rational_form.sign != -1)
    throw Error("rational form sign must be +1 or -1");
  cert.rational_form.M = rat_from(at(rf, "M"), "M");
  cert.rational_form.C = rat_from(at(rf, "C"), "C");
  cert.rational_form.level_radical = at(rf, "level_radical").get<bool>();
  const json& tr = at(j, "trace");
  cert.trace.wrt_u = at(tr, "wrt_u").get<bool>();
  cert.trace.v1 = tower_from(at(tr, "v1"), "v1");
  cert.trace.v2 = tower_from(at(tr, "v2"), "v2");
  cert.trace.alpha1 = tower_from(at(tr, "alpha1"), "alpha1");
  cert.trace.beta1 = tower_from(at(tr, "beta1"), "beta1");
  cert.trace.alpha2 = tower_from(at(tr, "alpha2"), "alpha2");
  cert.trace.beta2 = tower_from(at(tr, "beta2"), "beta2");
  cert.trace.m0 = tower_from(at(tr, "m0"), "m0");
  cert.trace.m_ratio = tower_from(at(tr, "m_ratio"), "m_ratio");
  cert.trace.d = cert.d;
  cert.trace.ell = cert.ell;
  cert.trace.s = cert.s;
  const json& pt = at(j, "point");
  cert.point.u_in_tower = at(pt, "u_in_tower").get<bool>();
  cert.point.u0 = tower_from(at(pt, "u0"), "u0");
  cert.point.v0 = tower_from(at(pt, "v0"), "v0");
  cert.point.zeta = tower_from(at(pt, "zeta"), "zeta");
  cert.point.u0sq = tower_from(at(pt, "u0sq"), "u0sq");
  cert.point.alpha0 = tower_from(at(pt, "alpha0"), "alpha0");
  cert.point.beta0 = tower_from(at(pt, "beta0"), "beta0");
  cert.equation_source = at(j, "equation_source").get<std::string>();
  return cert;
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  for (int shift = 60; shift >= 0; shift -= 4)
    os << "0123456789abcdef"[(h >> shift) & 0xf];
  return os.str();
}

std::string certificate_to_text(const SeriesCertificate& cert) {
  return certificate_json(cert).dump(2) + "\n";
}

SeriesCertificate certificate_from_text(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw Error("certificate text is not valid JSON");
  return certificate_from_json(j);
}

void save_certificate(const SeriesCertificate& cert, const std::string& path) {
  json file;
  file["schema_version"] = kCertificateSchemaVersion;
  file["certificate"] = certificate_json(cert);
  json prov;
  prov["equation_hash"] = "fnv1a:" + fnv1a_hex(cert.equation_source);
  prov["tool_version"] = kToolVersion;
  prov["timestamp"] = utc_timestamp();
  file["provenance"] = std::move(prov);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open certificate file for writing: " + path);
  out << file.dump(2) << "\n";
  if (!out) throw Error("failed writing certificate file: " + path);
}

SeriesCertificate load_certificate(const std::string& path,
                                   std::string* provenance_json_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open certificate file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  json file = json::parse(buf.str(), nullptr, /*allow_exceptions=*/false);
  if (file.is_discarded())
    throw Error("certificate file is not valid JSON: " + path);
  if (!file.is_object() || !file.contains("schema_version"))
    throw Error("certificate file has no schema_version: " + path);
  const int version = file["schema_version"].get<int>();
  if (version != kCertificateSchemaVersion)
    throw Error("unsupported certificate schema version " +
                std::to_string(version));
  SeriesCertificate cert = certificate_from_json(at(file, "certificate"));
  const json& prov = at(file, "provenance");
  const std::string want = "fnv1a:" + fnv1a_hex(cert.equation_source);
  if (at(prov, "equation_hash").get<std::string>() != want)
    throw Error("equation hash mismatch in certificate file: " + path);
  if (provenance_json_out) *provenance_json_out = prov.dump(2);
  return cert;
}

}  // namespace rama
