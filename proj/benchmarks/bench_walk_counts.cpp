#include <benchmark/benchmark.h>

#include "merw/graph.hpp"
#include "merw/walk_counts.hpp"

static void BM_ShellSweepTreeBall(benchmark::State& state) {
  const int radius = static_cast<int>(state.range(0));
  for (auto _ : state) {
    merw::BallCounts bc(merw::BallTruncation::tree_ball(4, radius, 1.0));
    bc.advance_to(radius);
    benchmark::DoNotOptimize(bc.counts(0).log_value(0));
  }
  state.SetItemsProcessed(state.iterations() * radius);
}
BENCHMARK(BM_ShellSweepTreeBall)->Arg(300)->Arg(1000)->Arg(3000);

static void BM_AdjacencySweepRandomRegular(benchmark::State& state) {
  const merw::Vertex n = static_cast<merw::Vertex>(state.range(0));
  const merw::WeightedGraph g = merw::gen::random_regular(n, 4, 1);
  merw::WalkCountVector v = merw::WalkCountVector::ones(g.vertex_count());
  for (auto _ : state) {
    v = merw::adjacency_sweep(g, v);
    benchmark::DoNotOptimize(v.mantissa(0));
  }
  state.SetItemsProcessed(state.iterations() * g.edge_count() * 2);
}
BENCHMARK(BM_AdjacencySweepRandomRegular)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_UrwEstimateAtRoot(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const merw::BallTruncation ball = merw::BallTruncation::tree_ball(4, n + 2, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(merw::urw_estimate(ball, 0, n).row_sum);
  }
}
BENCHMARK(BM_UrwEstimateAtRoot)->Arg(60)->Arg(300);

BENCHMARK_MAIN();
