#pragma once

#include "merw/graph.hpp"

namespace merw {

enum class BallModel { tree, lattice, canopy };

// Exact finite window of an infinite model. Walk counts of length n from a
// point at distance k to the center (tree: shell, canopy: level, lattice: L1
// distance to the origin) computed on the truncation equal the infinite-model
// counts iff k + n <= radius. The window is enforced as a hard precondition:
// the spectral radius of a truncated ball differs from the infinite model, so
// silently running past the window would converge to the wrong object.
struct BallTruncation {
  BallModel model = BallModel::tree;
  int param = 3;             // branching d (tree/canopy) or dimension (lattice)
  int radius = 0;            // truncation radius / top canopy level
  double center_loop = 0.0;  // loop weight at the center (tree/lattice only)

  int min_shell() const { return model == BallModel::canopy ? 1 : 0; }
  bool window_ok(int dist, int n) const {
    return dist >= min_shell() && dist <= radius && n >= 0 && dist + n <= radius;
  }
  void require_window(int dist, int n) const;

  // Explicit graph, for cross-checks at small radius. Tree and canopy balls
  // of large radius are astronomically big; all production computation runs
  // on the shell projection instead (see walk_counts.hpp).
  WeightedGraph materialize() const;

  static BallTruncation tree_ball(int d, int radius, double sigma_at_center = 0.0);
  static BallTruncation lattice_ball(int dim, int radius, double sigma_at_origin = 0.0);
  static BallTruncation canopy_levels(int d, int top_level);
};

}  // namespace merw
