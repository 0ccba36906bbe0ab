// Serial reference vs OpenMP sweep on a shortened scenario.
#include "lieobs/batch.hpp"

#include <benchmark/benchmark.h>

namespace {

lieobs::Scenario bench_scenario() {
  lieobs::Scenario s = lieobs::default_scenario();
  s.duration = 2.0;
  return s;
}

void BM_SweepSerial(benchmark::State& state) {
  const lieobs::Scenario s = bench_scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lieobs::sweep_serial(s, static_cast<int>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepParallel(benchmark::State& state) {
  const lieobs::Scenario s = bench_scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lieobs::sweep_parallel(s, static_cast<int>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = lieobs::parallel_threads();
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
