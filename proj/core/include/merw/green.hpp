#pragma once

#include <memory>
#include <span>
#include <vector>

#include "merw/graph.hpp"

namespace merw {

// Walk generating functions f_xy(t) = (1 - tA)^{-1}_{xy}.

// d-regular tree, closed form. Removing a vertex leaves pending (d-1)-ary
// trees whose diagonal generating function h satisfies
//   h(t) = 1 / (1 - (d-1) t^2 h(t)),
// and then f_xx(t) = 1 / (1 - d t^2 h(t)), f_xy = f_xx (t h)^dist.
// Domain: 0 <= t <= 1/(2 sqrt(d-1)), the square-root branch point.
class TreeGreen {
 public:
  explicit TreeGreen(int d);
  int d() const { return d_; }
  double branch_point() const;
  double h(double t) const;
  double f(double t, int dist) const;

 private:
  int d_;
};

// Z^dim. Return probabilities P_n(0,0) are built exactly by conditioning on
// how many steps each coordinate takes (a binomial mixture of lower
// dimensional walks against the 1-d walk); no spatial box is needed for the
// diagonal. f_oo(1/2dim) = truncated series + fitted n^{-dim/2} tail.
// For t < 1/(2 dim) the series converges geometrically. t beyond the SRW
// point is out of range, as is the divergent diagonal in dims 1 and 2 at it.
class LatticeGreen {
 public:
  explicit LatticeGreen(int dim, int series_terms = 0);  // 0 -> per-dim default
  int dim() const { return dim_; }
  int degree() const { return 2 * dim_; }
  int terms() const { return terms_; }

  struct Value {
    double value = 0.0;
    double error_bound = 0.0;
  };

  Value f_origin(double t) const;
  // f_ox(t) for an explicit lattice point; O(terms^2) per call
  Value f_point(double t, std::span<const int> x) const;
  const std::vector<double>& return_probs() const { return p0_; }
  bool diagonal_divergent_at_srw_point() const { return dim_ <= 2; }

 private:
  std::vector<double> point_probs(std::span<const int> x) const;
  Value sum_series(const std::vector<double>& probs, double t, int parity) const;

  int dim_;
  int terms_;
  std::vector<double> p0_;
};

// Exact evaluation on an explicit finite graph via a dense LU solve of
// (1 - tA) u = e_y; the factorization is cached per t.
class FiniteGreen {
 public:
  FiniteGreen(WeightedGraph g, Vertex origin);
  const WeightedGraph& graph() const { return g_; }
  Vertex origin() const { return origin_; }
  double rho() const { return rho_; }  // pole of f at t = 1/rho

  double f(double t, Vertex x, Vertex y) const;
  double f_origin_diag(double t) const { return f(t, origin_, origin_); }

 private:
  struct Cache;
  const Cache& factor(double t) const;

  WeightedGraph g_;
  Vertex origin_;
  double rho_;
  mutable std::shared_ptr<Cache> cache_;
};

// Model-tagged wrapper used by the rank-one machinery.
class GreenFunction {
 public:
  static GreenFunction tree(int d);
  static GreenFunction lattice(int dim, int series_terms = 0);
  static GreenFunction finite(WeightedGraph g, Vertex origin);

  bool is_tree() const { return tree_ != nullptr; }
  bool is_lattice() const { return lattice_ != nullptr; }
  bool is_finite() const { return finite_ != nullptr; }
  const TreeGreen& as_tree() const { return *tree_; }
  const LatticeGreen& as_lattice() const { return *lattice_; }
  const FiniteGreen& as_finite() const { return *finite_; }

  // diagonal f_oo(t); lattice values may carry a truncation error bound
  double diagonal(double t) const;

 private:
  std::shared_ptr<TreeGreen> tree_;
  std::shared_ptr<LatticeGreen> lattice_;
  std::shared_ptr<FiniteGreen> finite_;
};

}  // namespace merw
