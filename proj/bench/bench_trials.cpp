// Serial vs OpenMP trial runner on a mid-sized corrupted run.

#include <benchmark/benchmark.h>

#include "dmab/engine.hpp"

namespace {

dmab::ExperimentConfig bench_config() {
  dmab::ExperimentConfig cfg;
  cfg.graph.kind = dmab::GraphKind::Complete;
  cfg.graph.nodes = 10;
  cfg.instance.arms = 10;
  cfg.horizon = 5000;
  cfg.trials = 8;
  cfg.seed = 7;
  cfg.threat.model = dmab::ThreatModel::Corruption;
  cfg.threat.all_agents = true;
  cfg.threat.budget = 500;
  return cfg;
}

void BM_Serial(benchmark::State& state) {
  const auto cfg = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(dmab::run_experiment_serial(cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.trials));
}

void BM_Parallel(benchmark::State& state) {
  const auto cfg = bench_config();
  const auto jobs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dmab::run_experiment(cfg, jobs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.trials));
}

}  // namespace

BENCHMARK(BM_Serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
