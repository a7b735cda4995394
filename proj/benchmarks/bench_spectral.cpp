#include <benchmark/benchmark.h>

#include "merw/graph.hpp"
#include "merw/spectral.hpp"

static void BM_PrincipalPair(benchmark::State& state) {
  const merw::Vertex n = static_cast<merw::Vertex>(state.range(0));
  const merw::WeightedGraph g = merw::perturb_loops(
      merw::gen::random_regular(n, 4, 1), {{0}, 4.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(merw::principal_pair(g).rho);
  }
}
BENCHMARK(BM_PrincipalPair)->Arg(500)->Arg(4000)->Arg(20000)
    ->Unit(benchmark::kMillisecond);

static void BM_MerwFullReport(benchmark::State& state) {
  const merw::Vertex n = static_cast<merw::Vertex>(state.range(0));
  const merw::WeightedGraph g = merw::perturb_loops(
      merw::gen::random_regular(n, 4, 1), {{0}, 1.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(merw::merw(g).ks_entropy);
  }
}
BENCHMARK(BM_MerwFullReport)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_ConfigurationModel(benchmark::State& state) {
  const merw::Vertex n = static_cast<merw::Vertex>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(merw::gen::random_regular(n, 4, seed++).edge_count());
  }
}
BENCHMARK(BM_ConfigurationModel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
