#include <benchmark/benchmark.h>

#include <cmath>

#include "xtalk/demod.hpp"
#include "xtalk/diplexer.hpp"
#include "xtalk/fastica.hpp"
#include "xtalk/pipeline.hpp"
#include "xtalk/preprocess.hpp"

using namespace xtalk;

namespace {

Scenario mixed_pair(std::size_t n) {
  ScenarioConfig sc;
  sc.n = n;
  sc.snr_db = 40.0;
  return generate_scenario(sc);
}

}  // namespace

static void BM_Whiten(benchmark::State& state) {
  const auto scen = mixed_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(whiten(scen.mixed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Whiten)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMicrosecond);

static void BM_FastIcaFit(benchmark::State& state) {
  const auto w = whiten(mixed_pair(static_cast<std::size_t>(state.range(0))).mixed);
  FastIcaConfig cfg;
  cfg.ortho = state.range(1) ? Orthogonalization::Deflation : Orthogonalization::Symmetric;
  for (auto _ : state) benchmark::DoNotOptimize(fit(w, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FastIcaFit)
    ->ArgsProduct({{1 << 12, 1 << 15, 1 << 18}, {0, 1}})
    ->ArgNames({"n", "deflation"})
    ->Unit(benchmark::kMillisecond);

static void BM_Demodulate(benchmark::State& state) {
  const auto scen = mixed_pair(static_cast<std::size_t>(state.range(0)));
  const InterferometerParams p;
  const auto s = default_demod_settings(p.f_het1, p.f_het2, p.sample_rate);
  for (auto _ : state) benchmark::DoNotOptimize(demodulate_detailed(scen.clean.channel(0), p.sample_rate, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Demodulate)->RangeMultiplier(4)->Range(1 << 14, 1 << 18)->Unit(benchmark::kMillisecond);

static void BM_Diplex(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / 200e6;
    x[k] = std::sin(2 * 3.141592653589793 * 25e6 * t) + std::sin(2 * 3.141592653589793 * 40e6 * t + 0.4);
  }
  const DiplexConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(diplex(x, 200e6, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Diplex)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
