#include <vector>

#include <benchmark/benchmark.h>

#include "polaron/gaussian.hpp"
#include "polaron/rng.hpp"

namespace {

using polaron::Interval;

struct RandomConfig {
  std::vector<Interval> intervals;
  std::vector<double> marks;
};

RandomConfig make_config(std::size_t n, double T, std::uint64_t seed) {
  polaron::Rng rng = polaron::make_stream(seed, 0);
  RandomConfig c;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = polaron::uniform01(rng) * (T - 1.0);
    c.intervals.push_back({s, s + 0.2 + polaron::uniform01(rng) * 0.8});
    c.marks.push_back(polaron::uniform01(rng) * 5.0);
  }
  return c;
}

void BM_Sigma2Exact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const RandomConfig c = make_config(n, 20.0, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(polaron::sigma2_exact(c.intervals, c.marks, 20.0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Sigma2Exact)->RangeMultiplier(2)->Range(2, 128)->Complexity();

void BM_Sigma2DeterminantRatio(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const RandomConfig c = make_config(n, 20.0, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(polaron::sigma2_exact_determinant_ratio(c.intervals, c.marks, 20.0));
  }
}
BENCHMARK(BM_Sigma2DeterminantRatio)->RangeMultiplier(4)->Range(2, 128);

void BM_LeastSquares(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const RandomConfig c = make_config(n, 20.0, 3);
  const polaron::GaussianWorkspace ws(c.intervals, c.marks, 20.0);
  for (auto _ : state) benchmark::DoNotOptimize(ws.sigma2_least_squares());
}
BENCHMARK(BM_LeastSquares)->RangeMultiplier(4)->Range(2, 128);

void BM_LogWeightNormalizer(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const RandomConfig c = make_config(n, 20.0, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(polaron::log_weight_normalizer(c.intervals, c.marks, 3));
  }
}
BENCHMARK(BM_LogWeightNormalizer)->RangeMultiplier(4)->Range(2, 128);

void BM_Sigma2Disjoint(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Interval> ivs;
  for (std::size_t i = 0; i < n; ++i) ivs.push_back({2.0 * i, 2.0 * i + 1.0});
  const std::vector<double> marks(n, 2.0);
  const double T = 2.0 * static_cast<double>(n);
  for (auto _ : state) benchmark::DoNotOptimize(polaron::sigma2_disjoint(ivs, marks, T));
}
BENCHMARK(BM_Sigma2Disjoint)->Range(8, 4096);

}  // namespace
