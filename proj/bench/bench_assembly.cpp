#include <benchmark/benchmark.h>

#include "fracspline/analysis.hpp"
#include "fracspline/collocation.hpp"

using namespace fracspline;

namespace {

CollocationConfig config_for(const benchmark::State& state) {
  return CollocationConfig::with_default_s(3, static_cast<int>(state.range(0)));
}

void BM_AssembleSerial(benchmark::State& state) {
  const CollocationConfig c = config_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_serial(c, FractionalOrder(0.5)));
}

void BM_AssembleParallel(benchmark::State& state) {
  const CollocationConfig c = config_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(c, FractionalOrder(0.5)));
}

void BM_Solve(benchmark::State& state) {
  const FractionalProblem p = example2_problem(FractionalOrder(0.5));
  const CollocationConfig c = config_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, c));
}

}  // namespace

BENCHMARK(BM_AssembleSerial)->DenseRange(6, 8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleParallel)->DenseRange(6, 8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve)->DenseRange(6, 8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
