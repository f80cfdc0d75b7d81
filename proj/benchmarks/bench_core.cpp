#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "plane_sweep/refine.hpp"
#include "plane_sweep/scenario.hpp"
#include "plane_sweep/search.hpp"
#include "plane_sweep/transfer.hpp"

namespace ps = plane_sweep;

namespace {

const ps::Scenario& table1() {
  static const ps::Scenario s = ps::load_scenario(PLANE_SWEEP_DATA_DIR "/table1.scn");
  return s;
}

void BM_DesignInspection(benchmark::State& state) {
  const auto& s = table1();
  const auto limits = s.mission.limits();
  for (auto _ : state)
    benchmark::DoNotOptimize(ps::design_inspection(s.planes[0], 0.5, -0.5, limits, s.constants));
}
BENCHMARK(BM_DesignInspection);

void BM_EstimateTransfer(benchmark::State& state) {
  const ps::MeanElements dep{6928.137, 0.001, 0.925, 0.3, 0.0, 0.2, 0.0};
  ps::MeanElements arr{7100.0, 0.02, 0.94, 0.31, -0.1, 1.0, 0.0};
  arr = ps::propagate_mean(arr, 86400.0);
  for (auto _ : state) benchmark::DoNotOptimize(ps::estimate_transfer_dv(dep, arr, 86400.0));
}
BENCHMARK(BM_EstimateTransfer);

void BM_RealizeTransfer(benchmark::State& state) {
  const ps::MeanElements dep{6928.137, 0.0, 0.925, 0.3, 0.0, 0.2, 0.0};
  ps::MeanElements arr = dep;
  arr.a += 100.0;
  arr.mean_anomaly += 1.0;
  arr = ps::propagate_mean(arr, 86400.0);
  for (auto _ : state) benchmark::DoNotOptimize(ps::realize_transfer(dep, arr, 86400.0));
}
BENCHMARK(BM_RealizeTransfer)->Unit(benchmark::kMillisecond);

void BM_EvaluateSequence(benchmark::State& state) {
  const auto& s = table1();
  const ps::PlaneCatalog catalog(s.planes, s.mission.limits(), s.constants);
  const auto params = ps::sequence_params(s, 3.75);
  std::vector<int> genes(s.planes.size());
  std::iota(genes.begin(), genes.end(), 0);
  std::shuffle(genes.begin(), genes.end(), std::mt19937_64(7));
  genes.resize(40);
  for (auto _ : state) benchmark::DoNotOptimize(ps::evaluate_sequence(genes, catalog, params));
}
BENCHMARK(BM_EvaluateSequence)->Unit(benchmark::kMicrosecond);

void BM_GaGenerations(benchmark::State& state) {
  ps::GaParams p;
  p.max_gen = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ps::ga_search(table1(), p));
}
BENCHMARK(BM_GaGenerations)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
