#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "merw/graph.hpp"

namespace merw {

enum class WalkKind { srw, merw, urw, custom };

// Sparse row-stochastic kernel laid out against a graph's CSR rows: probs
// are parallel to g.neighbors(x), loop_probs holds the diagonal. The kernel
// stores no back-pointer; callers pass the graph alongside and aligned()
// verifies the support matches.
struct MarkovKernel {
  WalkKind kind = WalkKind::custom;
  Vertex vertex_count = 0;
  std::vector<std::size_t> off;     // row offsets, size vertex_count + 1
  std::vector<double> probs;        // off-diagonal, aligned with neighbors()
  std::vector<double> loop_probs;   // diagonal, per vertex

  std::span<const double> row(Vertex x) const {
    return {probs.data() + off[x], probs.data() + off[x + 1]};
  }
  std::span<double> row(Vertex x) {
    return {probs.data() + off[x], probs.data() + off[x + 1]};
  }
  double loop(Vertex x) const { return loop_probs[x]; }
  double row_sum(Vertex x) const {
    double s = loop_probs[x];
    for (double p : row(x)) s += p;
    return s;
  }

  // probability of the step x -> y, O(log deg); diagonal via loop()
  double prob(const WeightedGraph& g, Vertex x, Vertex y) const;

  // true when the strictly positive entries coincide with g's edges/loops
  bool aligned(const WeightedGraph& g) const;
  // weaker: rows are laid out against g and positive entries sit on edges;
  // zero rows entries are allowed (deterministic kernels)
  bool supported_on(const WeightedGraph& g) const;
  void require_aligned(const WeightedGraph& g) const {
    if (!aligned(g)) {
      throw std::invalid_argument("kernel support does not match the graph");
    }
  }
  void require_supported_on(const WeightedGraph& g) const {
    if (!supported_on(g)) {
      throw std::invalid_argument("kernel is not supported on the graph");
    }
  }

  static MarkovKernel zero_like(const WeightedGraph& g, WalkKind kind);
};

// Simple random walk: each step proportional to the edge weight (loop
// included), i.e. p_xy = A_xy / deg_A(x).
MarkovKernel srw_kernel(const WeightedGraph& g);

}  // namespace merw
