#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace merw {

using Vertex = std::int32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double w = 1.0;
};

// Optional vertex annotations attached by the generators. `dist` holds the
// hop distance to `center` (tree shells, canopy levels, lattice L1 distance);
// `coords` holds lattice coordinates flattened row-major when coord_dim > 0.
struct VertexLabels {
  Vertex center = -1;
  std::vector<int> dist;
  std::vector<int> coords;
  int coord_dim = 0;

  bool empty() const { return center < 0 && dist.empty() && coords.empty(); }
};

// Finite symmetric weighted graph with per-vertex self-loop weights.
// Immutable once constructed. Storage is CSR with neighbor lists sorted by
// vertex id, so row access is O(deg) and edge lookup is O(log deg).
//
// A self-loop of weight s contributes s once to the weighted degree and acts
// as a single step x->x of weight s in every walk computation.
class WeightedGraph {
 public:
  WeightedGraph(Vertex n, std::vector<Edge> edges,
                std::vector<double> loops = {}, VertexLabels labels = {});

  Vertex vertex_count() const { return n_; }
  std::size_t edge_count() const { return nbr_.size() / 2; }

  std::span<const Vertex> neighbors(Vertex x) const {
    return {nbr_.data() + off_[x], nbr_.data() + off_[x + 1]};
  }
  std::span<const double> edge_weights(Vertex x) const {
    return {wt_.data() + off_[x], wt_.data() + off_[x + 1]};
  }
  double loop(Vertex x) const { return loops_[x]; }
  bool has_loops() const { return has_loops_; }

  // 0 when (x, y) is not an edge; use loop(x) for the diagonal
  double edge_weight(Vertex x, Vertex y) const;

  // combinatorial degree: off-diagonal neighbors, plus the loop if present
  int degree(Vertex x) const;
  // deg_A(x) = sum_y A_xy + loop weight
  double weighted_degree(Vertex x) const { return wdeg_[x]; }
  // D >= max(deg(x), deg_A(x)) over all x
  double degree_bound() const { return d_bound_; }

  bool connected() const { return connected_; }

  // BFS hop distances from s; -1 for unreachable vertices
  std::vector<int> distances_from(Vertex s) const;
  std::vector<int> distances_from(std::span<const Vertex> sources) const;

  const VertexLabels& labels() const { return labels_; }

 private:
  Vertex n_ = 0;
  std::vector<std::size_t> off_;
  std::vector<Vertex> nbr_;
  std::vector<double> wt_;
  std::vector<double> loops_;
  std::vector<double> wdeg_;
  double d_bound_ = 0.0;
  bool connected_ = false;
  bool has_loops_ = false;
  VertexLabels labels_;
};

// Self-loop perturbation: weight `sigma` added at every vertex of `support`.
struct LoopSpec {
  std::vector<Vertex> support;
  double sigma = 0.0;
};

// Returns a copy of g with loop weight increased by spec.sigma on the
// support; everything else (edges, labels) is carried over unchanged.
WeightedGraph perturb_loops(const WeightedGraph& g, const LoopSpec& spec);

// --- generators -------------------------------------------------------

namespace gen {

WeightedGraph cycle(Vertex n);
WeightedGraph path(Vertex n);
WeightedGraph complete(Vertex n);

// Configuration model with full restart on loops, parallel edges or a
// disconnected result. Deterministic in the seed. Throws when n*d is odd,
// d >= n, or the restart budget is exhausted.
WeightedGraph random_regular(Vertex n, int d, std::uint64_t seed);

// Ball of radius r in the d-regular tree, center vertex 0, shells labeled.
WeightedGraph tree_ball(int d, int radius);

// Grid graph on {0..side-1}^dim with unit weights; center labeled at the
// midpoint, dist labels are L1 distances to it.
WeightedGraph lattice_box(int dim, int side);

// Truncation of the d-regular canopy tree: the subtree hanging below a
// single spine vertex at level `levels`. Leaves sit at level 1; `dist`
// labels store the level.
WeightedGraph canopy_trunc(int d, int levels);

}  // namespace gen

struct FamilySpec {
  enum class Kind { cycle, path, complete, random_regular, tree_ball, lattice_box, canopy_trunc };
  Kind kind = Kind::cycle;
  Vertex n = 0;        // cycle/path/complete/random_regular
  int d = 0;           // degree or tree branching
  int dim = 0;         // lattice dimension
  int extent = 0;      // radius / side / levels
  std::uint64_t seed = 0;
};

WeightedGraph generate(const FamilySpec& spec);

// --- edge-list text format ---------------------------------------------
//
//   n <vertex-count> d-bound <D>
//   <x> <y> <w>          one line per undirected edge
//   loop <x> <w>         one line per self-loop
//
// Weights are printed with 17 significant digits so a round trip is exact.

void write_edge_list(std::ostream& out, const WeightedGraph& g);
WeightedGraph read_edge_list(std::istream& in);
WeightedGraph read_edge_list_file(const std::string& path);
void write_edge_list_file(const std::string& path, const WeightedGraph& g);

}  // namespace merw
