// Serial reference kernels against their OpenMP counterparts.
//
//   build/bench_kernels --benchmark_counters_tabular=true

#include <benchmark/benchmark.h>

#include "rlab/lab.hpp"
#include "rlab/models.hpp"
#include "rlab/solver.hpp"

namespace {

using namespace rlab;

const ColoredHypergraph& dense_instance() {
  static const ColoredHypergraph h = sample_colored(9, 4, 0.5, 6, 11);
  return h;
}

void BM_CountHampermsSerial(benchmark::State& state) {
  const CycleSpec spec = CycleSpec::make(9, 4, 1);
  for (auto _ : state) benchmark::DoNotOptimize(count_hamperms_serial(dense_instance(), spec));
}

void BM_CountHampermsParallel(benchmark::State& state) {
  const CycleSpec spec = CycleSpec::make(9, 4, 1);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_hamperms(dense_instance(), spec, 9, workers));
}

void BM_OverlapProfileSerial(benchmark::State& state) {
  const CycleSpec spec = CycleSpec::make(9, 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(overlap_profile_serial(spec));
}

void BM_OverlapProfileParallel(benchmark::State& state) {
  const CycleSpec spec = CycleSpec::make(9, 3, 2);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(overlap_profile(spec, 9, workers));
}

void BM_PairHistogramSerial(benchmark::State& state) {
  const CycleSpec spec = CycleSpec::make(7, 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(pair_overlap_histogram_serial(spec));
}

void BM_PairHistogramParallel(benchmark::State& state) {
  const CycleSpec spec = CycleSpec::make(7, 3, 2);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pair_overlap_histogram(spec, 7, workers));
}

void BM_Sweep(benchmark::State& state) {
  SweepConfig cfg;
  cfg.n = 12;
  cfg.k = 3;
  cfg.ell = 1;
  cfg.colors.r = 6;
  cfg.grid = {0.1, 0.2, 0.3, 0.4};
  cfg.trials = 50;
  cfg.seed = 3;
  cfg.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cfg));
}

}  // namespace

BENCHMARK(BM_CountHampermsSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CountHampermsParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OverlapProfileSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OverlapProfileParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PairHistogramSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PairHistogramParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Sweep)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
