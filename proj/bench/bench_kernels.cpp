// Serial reference paths against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "fieldmix/dependency.hpp"
#include "fieldmix/dynamics.hpp"
#include "fieldmix/exact.hpp"
#include "fieldmix/models.hpp"

using namespace fieldmix;

namespace {

Exec mode(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_Certify(benchmark::State& state) {
  const WeightedFamily f = hardcore(random_regular(16, 3, 1), 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(certify(f, ExhaustiveStrategy{}, mode(state)));
}

void BM_GlauberMatrix(benchmark::State& state) {
  const ExactDistribution d = enumerate(hardcore(random_regular(16, 3, 2), 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(glauber_matrix(d, mode(state)));
}

void BM_TrickledownSweep(benchmark::State& state) {
  const ExactDistribution d = enumerate(hardcore(random_regular(12, 3, 3), 0.4));
  const std::vector<double> thetas{0.1, 0.5, 0.9};
  for (auto _ : state) benchmark::DoNotOptimize(trickledown_sweep(d, thetas, 0.1, mode(state)));
}

void BM_RunChains(benchmark::State& state) {
  const WeightedFamily f = hardcore(random_regular(200, 3, 4), 0.5);
  ChainConfig cfg;
  cfg.initial = f.empty_set();
  cfg.steps = 20000;
  cfg.chains = 8;
  cfg.thin = 100;
  cfg.seed = 5;
  for (auto _ : state) benchmark::DoNotOptimize(run_chains(f, cfg, GlauberKind{}, mode(state)));
}

}  // namespace

BENCHMARK(BM_Certify)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GlauberMatrix)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrickledownSweep)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunChains)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
