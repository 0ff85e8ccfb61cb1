#include <benchmark/benchmark.h>

#include "polaron/estimator.hpp"
#include "polaron/kernels.hpp"
#include "polaron/pointprocess.hpp"

namespace {

void BM_IntervalProcess(benchmark::State& state) {
  polaron::ModelParams p;
  p.alpha = static_cast<double>(state.range(0));
  p.T = 100.0;
  const auto g = polaron::MemoryDensity::exponential();
  polaron::Rng rng = polaron::make_stream(11, 0);
  for (auto _ : state) benchmark::DoNotOptimize(polaron::sample_interval_process(p, g, rng));
}
BENCHMARK(BM_IntervalProcess)->Arg(1)->Arg(10)->Arg(100);

void BM_ThinnedSkeleton(benchmark::State& state) {
  polaron::ModelParams p;
  p.alpha = 1000.0;
  p.epsilon = 1.0;
  p.T = static_cast<double>(state.range(0));
  const auto g = polaron::MemoryDensity::exponential();
  polaron::Rng rng = polaron::make_stream(12, 0);
  for (auto _ : state) {
    const auto thinned = polaron::sample_thinned_marked(p, g, 2.0, rng);
    benchmark::DoNotOptimize(polaron::renewal_skeleton(thinned.config()));
  }
}
BENCHMARK(BM_ThinnedSkeleton)->Arg(100)->Arg(5000);

void BM_ConfigurationWeight(benchmark::State& state) {
  polaron::ModelParams p;
  std::vector<polaron::Interval> ivs{{0.0, 1.5}, {0.5, 2.0}, {1.0, 2.5}};
  ivs.resize(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(polaron::configuration_weight(ivs, p));
}
BENCHMARK(BM_ConfigurationWeight)->DenseRange(1, 3);

void BM_McmcSteps(benchmark::State& state) {
  polaron::ModelParams p;
  p.alpha = 0.5;
  p.T = 10.0;
  const auto g = polaron::MemoryDensity::exponential();
  polaron::McmcConfig c;
  c.steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(polaron::run_birth_death_chain(p, g, c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McmcSteps)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
