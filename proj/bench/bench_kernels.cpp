#include <benchmark/benchmark.h>

#include <vector>

#include "modframe/kernels.hpp"
#include "modframe/random.hpp"

using modframe::CMatrix;
using modframe::Rng;
using modframe::kernels::Execution;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_Gemm(benchmark::State& state) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(state.range(1));
  const CMatrix a = rng.gaussian(n, n);
  const CMatrix b = rng.gaussian(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(modframe::kernels::gemm(a, b, mode(state)));
  label(state);
}
BENCHMARK(BM_Gemm)->ArgsProduct({{0, 1}, {64, 192}})->UseRealTime();

void BM_SampledMaxRatio(benchmark::State& state) {
  Rng rng(2);
  const CMatrix num = rng.gaussian(6, 12);
  const CMatrix den = rng.gaussian(6, 12);
  const auto samples = static_cast<std::size_t>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(modframe::kernels::sampled_max_ratio(num, den, samples, 7, mode(state)));
  label(state);
}
BENCHMARK(BM_SampledMaxRatio)->ArgsProduct({{0, 1}, {16384, 131072}})->UseRealTime();

void BM_CompetitorCosts(benchmark::State& state) {
  Rng rng(3);
  const CMatrix base = rng.gaussian(8, 24);
  const CMatrix target = rng.gaussian(8, 24);
  std::vector<CMatrix> us;
  for (int64_t i = 0; i < state.range(1); ++i) us.push_back(rng.unitary(8));
  for (auto _ : state)
    benchmark::DoNotOptimize(modframe::kernels::competitor_costs(target, base, us, mode(state)));
  label(state);
}
BENCHMARK(BM_CompetitorCosts)->ArgsProduct({{0, 1}, {256, 2048}})->UseRealTime();

void BM_SpreadScan(benchmark::State& state) {
  Rng rng(4);
  std::vector<double> spectrum(512);
  for (auto& v : spectrum) v = rng.uniform(1.0, 2.0);
  const auto points = static_cast<std::size_t>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(modframe::kernels::spread_scan(spectrum, 1.0, 2.0, points, mode(state)));
  label(state);
}
BENCHMARK(BM_SpreadScan)->ArgsProduct({{0, 1}, {1024, 65536}})->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
