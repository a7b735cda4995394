#include <benchmark/benchmark.h>

#include "merw/canopy.hpp"
#include "merw/green.hpp"
#include "merw/rank_one.hpp"

static void BM_LatticeGreenTables(benchmark::State& state) {
  const int terms = static_cast<int>(state.range(0));
  for (auto _ : state) {
    merw::LatticeGreen g(3, terms);
    benchmark::DoNotOptimize(g.f_origin(1.0 / 6.0).value);
  }
}
BENCHMARK(BM_LatticeGreenTables)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_RhoSigmaBisection(benchmark::State& state) {
  const merw::RankOneModel m = merw::RankOneModel::tree(4);
  double sigma = 2.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.rho_sigma(sigma));
    sigma = sigma < 6.0 ? sigma + 0.01 : 2.7;
  }
}
BENCHMARK(BM_RhoSigmaBisection);

static void BM_PhaseSweep(benchmark::State& state) {
  const merw::RankOneModel m = merw::RankOneModel::tree(4);
  const auto grid = merw::parse_grid("0:4:0.05");
  for (auto _ : state) {
    benchmark::DoNotOptimize(merw::phase_sweep(m, grid).size());
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_PhaseSweep)->Unit(benchmark::kMillisecond);

static void BM_CanopyRatio(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(merw::canopy_ratio(3, 2, n).up_parity);
  }
}
BENCHMARK(BM_CanopyRatio)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_CanopySimulation(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(merw::simulate_canopy(3, state.range(0), seed++).final_level);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CanopySimulation)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
