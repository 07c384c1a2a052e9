// Command-line driver: derive certificates from registry equations, verify
// them, compute pi digits, recognize algebraic constants, and list the
// registry. Exit codes: 0 success, 1 failed check or failed derivation,
// 2 usage or data error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rama/derive.hpp"
#include "rama/errors.hpp"
#include "rama/identify.hpp"
#include "rama/modeq.hpp"
#include "rama/piengine.hpp"
#include "rama/serialize.hpp"

namespace {

namespace fs = std::filesystem;

std::string registry_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("RAMA_EQUATIONS"); env && *env)
    return env;
  return "data/equations";
}

int cmd_derive(const std::string& registry_flag, const std::string& name,
               const std::string& klass_str, const std::string& out_path) {
  rama::SeriesClass klass;
  try {
    klass = rama::series_class_from_string(klass_str);
  } catch (const rama::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::vector<rama::ModularEquation> registry;
  try {
    registry = rama::registry_load(registry_dir(registry_flag));
  } catch (const rama::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const rama::ModularEquation* eq = nullptr;
  for (const auto& e : registry)
    if (e.name == name) eq = &e;
  if (!eq) {
    std::cerr << "error: equation not found: " << name << "\n";
    return 2;
  }
  try {
    rama::SeriesCertificate cert = rama::derive_series(*eq, klass);
    if (!out_path.empty()) rama::save_certificate(cert, out_path);
    std::cout << rama::display_identity(cert) << "\n";
    return 0;
  } catch (const rama::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_verify(const std::string& cert_path, long digits) {
  rama::SeriesCertificate cert;
  try {
    cert = rama::load_certificate(cert_path);
  } catch (const rama::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    rama::VerificationReport report = rama::verify_certificate(cert, digits);
    for (const auto& check : report.checks) {
      std::cout << (check.pass ? "PASS " : "FAIL ") << check.name;
      if (!check.detail.empty()) std::cout << "  (" << check.detail << ")";
      std::cout << "\n";
    }
    return report.all_pass() ? 0 : 1;
  } catch (const rama::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_pi(const std::string& cert_path, long digits,
           const std::string& out_path, bool force) {
  rama::SeriesCertificate cert;
  try {
    cert = rama::load_certificate(cert_path);
  } catch (const rama::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    if (!force) {
      // Cheap pre-flight: the exact checks plus a 50-digit numeric identity.
      rama::VerificationReport report = rama::verify_certificate(cert, 50);
      if (!report.all_pass()) {
        std::cerr << "error: certificate failed verification "
                     "(use --force to skip)\n";
        return 1;
      }
    }
    std::string digits_out = rama::pi_digits(cert, digits);
    std::string text = rama::format_digits(digits_out);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot open output file: " << out_path << "\n";
        return 2;
      }
      out << text;
    }
    return 0;
  } catch (const rama::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_identify(const std::string& re, const std::string& im,
                 const std::string& radicands_csv, long height) {
  rama::IdentifyOptions opts;
  opts.height = height;
  std::stringstream ss(radicands_csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      opts.radicands.emplace_back(item);
    } catch (const std::invalid_argument&) {
      std::cerr << "error: bad radicand: " << item << "\n";
      return 2;
    }
  }
  try {
    rama::TowerElement x = rama::identify_decimal(re, im, opts);
    std::cout << x.to_string() << "\n";
    return 0;
  } catch (const rama::NoMatch&) {
    std::cout << "no match\n";
    return 1;
  } catch (const rama::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_list(const std::string& registry_flag) {
  const std::string dir = registry_dir(registry_flag);
  if (!fs::is_directory(dir)) {
    std::cerr << "error: not a directory: " << dir << "\n";
    return 2;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".modeq")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  struct Bad {
    std::string file, message;
  };
  std::vector<Bad> errors;
  printf("%-24s %5s %3s %5s %4s %6s\n", "name", "level", "s", "deg", "k",
         "terms");
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      rama::ModularEquation eq = rama::parse_equation(buf.str());
      printf("%-24s %5d %3d %5d %4d %6zu\n", eq.name.c_str(), eq.level, eq.s,
             eq.degree, eq.k, eq.poly.terms().size());
    } catch (const rama::Error& e) {
      errors.push_back({path.filename().string(), e.what()});
    }
  }
  if (!errors.empty()) {
    printf("\nerrors:\n");
    for (const auto& bad : errors)
      printf("  %s: %s\n", bad.file.c_str(), bad.message.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ramanujan-type 1/pi series: derivation, certification, and "
               "high-precision evaluation"};
  app.require_subcommand(1);
  std::string registry_flag;
  app.add_option("--registry", registry_flag,
                 "Equation registry directory (default: $RAMA_EQUATIONS or "
                 "./data/equations)");

  auto* derive = app.add_subcommand("derive", "Derive a series certificate");
  std::string eq_name, klass_str = "alternating", out_path;
  derive->add_option("equation", eq_name, "Registry equation name")->required();
  derive->add_option("--class", klass_str, "positive or alternating")
      ->check(CLI::IsMember({"positive", "alternating"}));
  derive->add_option("--out", out_path, "Certificate output path");

  auto* verify = app.add_subcommand("verify", "Check a saved certificate");
  std::string cert_path;
  long digits = 1000;
  verify->add_option("certificate", cert_path, "Certificate file")->required();
  verify->add_option("--digits", digits, "Numeric identity digits (default "
                     "1000)");

  auto* pi = app.add_subcommand("pi", "Compute pi from a certificate");
  std::string pi_cert, pi_out;
  long pi_digits_n = 100;
  bool force = false;
  pi->add_option("certificate", pi_cert, "Certificate file")->required();
  pi->add_option("--digits", pi_digits_n, "Digits to compute");
  pi->add_option("--out", pi_out, "Write digits to a file instead of stdout");
  pi->add_flag("--force", force, "Skip pre-flight verification");

  auto* identify = app.add_subcommand(
      "identify", "Recognize a decimal value as a quadratic-radical element");
  std::string re = "0", im = "0", radicands;
  long height = 1000;
  identify->add_option("--re", re, "Real part (decimal string)");
  identify->add_option("--im", im, "Imaginary part (decimal string)");
  identify->add_option("--radicands", radicands,
                       "Comma-separated squarefree radicands, e.g. 3,89");
  identify->add_option("--height", height,
                       "Bound on numerator/denominator magnitude");

  auto* list = app.add_subcommand("list", "List registry equations");
  (void)list;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (derive->parsed())
    return cmd_derive(registry_flag, eq_name, klass_str, out_path);
  if (verify->parsed()) return cmd_verify(cert_path, digits);
  if (pi->parsed()) return cmd_pi(pi_cert, pi_digits_n, pi_out, force);
  if (identify->parsed()) return cmd_identify(re, im, radicands, height);
  if (list->parsed()) return cmd_list(registry_flag);
  return 2;
}
