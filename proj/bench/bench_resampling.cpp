// Serial reference kernels against their OpenMP counterparts.
// Run with --benchmark_counters_tabular=true for a compact table.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "mdrank/ranking.hpp"
#include "mdrank/resampling.hpp"
#include "mdrank/synth.hpp"

using namespace mdrank;

namespace {

const PredictionSet& cohort() {
  static const PredictionSet ps = binormal_scores({.n_pos = 750, .n_neg = 3040, .mu = 1.0});
  return ps;
}

const std::vector<PredictionSet>& field() {
  static const auto systems = synth_challenge(crossing_field(10, 42));
  return systems;
}

void BM_BootstrapSerial(benchmark::State& state) {
  const BootstrapOptions opts{.n_replicates = static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_measure_serial(cohort(), Measure::AucRoc, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BootstrapParallel(benchmark::State& state) {
  BootstrapOptions opts{.n_replicates = static_cast<std::size_t>(state.range(0))};
  opts.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_measure(cohort(), Measure::AucRoc, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_StabilitySerial(benchmark::State& state) {
  const StabilityOptions opts{.n_replicates = static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(rank_stability_serial(field(), Measure::SpecAt98, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_StabilityParallel(benchmark::State& state) {
  StabilityOptions opts{.n_replicates = static_cast<std::size_t>(state.range(0))};
  opts.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(rank_stability(field(), Measure::SpecAt98, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void thread_args(benchmark::internal::Benchmark* b) {
  const int max_threads = std::max(omp_get_max_threads(), 1);
  for (int t = 1; t <= std::max(max_threads, 4); t *= 2) b->Args({200, t});
}

}  // namespace

BENCHMARK(BM_BootstrapSerial)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapParallel)->Apply(thread_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_StabilitySerial)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StabilityParallel)->Apply(thread_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
