#include <benchmark/benchmark.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "rama/derive.hpp"
#include "rama/hyper.hpp"
#include "rama/modeq.hpp"
#include "rama/piengine.hpp"

namespace {

const rama::ModularEquation& equation(const char* name) {
  static std::vector<rama::ModularEquation> reg =
      rama::registry_load(RAMA_DATA_DIR);
  for (const auto& eq : reg)
    if (eq.name == name) return eq;
  throw std::runtime_error("equation not in registry");
}

const rama::SeriesCertificate& flagship() {
  static rama::SeriesCertificate cert = rama::derive_series(
      equation("chan-liaw-3-23"), rama::SeriesClass::alternating);
  return cert;
}

void BM_PiDigits(benchmark::State& state) {
  const long digits = state.range(0);
  const rama::SeriesCertificate& cert = flagship();  // derive outside timing
  for (auto _ : state) {
    std::string out = rama::pi_digits(cert, digits);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * digits);
}
BENCHMARK(BM_PiDigits)->Arg(1000)->Arg(10000)->Arg(100000)
    ->Unit(benchmark::kMillisecond);

void BM_BinarySplitting(benchmark::State& state) {
  const long terms = state.range(0);
  const rama::SeriesCertificate& cert = flagship();  // derive outside timing
  for (auto _ : state) {
    rama::SummationState st = rama::binsplit(cert, 0, terms);
    benchmark::DoNotOptimize(st);
  }
}
BENCHMARK(BM_BinarySplitting)->Arg(64)->Arg(512)->Arg(4096)
    ->Unit(benchmark::kMillisecond);

void BM_Hypergeometric(benchmark::State& state) {
  const mpfr_prec_t prec = state.range(0);
  rama::HyperParams p{3};
  rama::ComplexBall alpha =
      rama::ComplexBall::from_rational(rama::Rational(1, 3), prec);
  for (auto _ : state) {
    rama::ComplexBall v = rama::f_s(p, alpha, std::nullopt, prec);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_Hypergeometric)->Arg(128)->Arg(512)->Arg(2048)
    ->Unit(benchmark::kMillisecond);

void BM_TowerToBall(benchmark::State& state) {
  const mpfr_prec_t prec = state.range(0);
  const rama::TowerElement& v2 = flagship().trace.v2;
  for (auto _ : state) {
    rama::ComplexBall b = v2.to_ball(prec);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_TowerToBall)->Arg(128)->Arg(1024)->Arg(8192);

void BM_Derivation(benchmark::State& state) {
  const rama::ModularEquation& eq = equation("berndt-3-5");
  for (auto _ : state) {
    rama::SeriesCertificate cert =
        rama::derive_series(eq, rama::SeriesClass::alternating);
    benchmark::DoNotOptimize(cert);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Derivation)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
