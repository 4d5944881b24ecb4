// Serial reference loop vs OpenMP ensemble on short dyne and interferometer runs.

#include <benchmark/benchmark.h>

#include "phasetrack/ensemble.hpp"

namespace pt = phasetrack;

namespace {

pt::SimParams dyne_params() {
  pt::SimParams p;
  p.N = 1e4;
  p.X = 0.02;
  p.trajectories = 64;
  p.burn_in = 1.0;
  p.horizon = 3.0;
  return p;
}

pt::SimParams mzi_params() {
  pt::SimParams p;
  p.N = 100;
  p.trajectories = 16;
  p.horizon = 2000;
  return p;
}

void BM_dyne(benchmark::State& state, pt::Execution execution) {
  const pt::SimParams p = dyne_params();
  pt::EnsembleOptions options;
  options.execution = execution;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pt::run_dyne_ensemble(p, options).pooled().sum_exp);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p.trajectories) * 3000);
}

void BM_mzi(benchmark::State& state, pt::Execution execution) {
  const pt::SimParams p = mzi_params();
  pt::EnsembleOptions options;
  options.execution = execution;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pt::run_mzi_ensemble(p, options).pooled().sum_exp);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p.trajectories) * 2000);
}

}  // namespace

BENCHMARK_CAPTURE(BM_dyne, serial, pt::Execution::serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_dyne, parallel, pt::Execution::parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_mzi, serial, pt::Execution::serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_mzi, parallel, pt::Execution::parallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
