#include "merw/entropy.hpp"

#include <cmath>
#include <stdexcept>

#include "merw/walk_counts.hpp"

namespace merw {

namespace {

// y = P x (row-stochastic kernel applied to a column vector)
void kernel_apply(const WeightedGraph& g, const MarkovKernel& p,
                  const std::vector<double>& x, std::vector<double>& y) {
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    double s = p.loop(v) * x[v];
    const auto nb = g.neighbors(v);
    const auto pr = p.row(v);
    for (std::size_t i = 0; i < nb.size(); ++i) s += pr[i] * x[nb[i]];
    y[v] = s;
  }
}

std::vector<double> one_step_entropy(const WeightedGraph& g, const MarkovKernel& p) {
  std::vector<double> h1(g.vertex_count(), 0.0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    double h = 0.0;
    if (p.loop(v) > 0.0) h -= p.loop(v) * std::log(p.loop(v) / g.loop(v));
    const auto w = g.edge_weights(v);
    const auto pr = p.row(v);
    for (std::size_t i = 0; i < pr.size(); ++i) {
      if (pr[i] > 0.0) h -= pr[i] * std::log(pr[i] / w[i]);
    }
    h1[v] = h;
  }
  return h1;
}

}  // namespace

EntropyReport walk_entropy(const WeightedGraph& g, const MarkovKernel& p, int n_max) {
  p.require_supported_on(g);
  if (n_max < 1) throw std::invalid_argument("walk_entropy: need n_max >= 1");

  EntropyReport rep;
  rep.n_max = n_max;
  rep.h1 = one_step_entropy(g, p);

  std::vector<double> hm2(g.vertex_count(), 0.0);  // H^{n-2}
  std::vector<double> hm1(g.vertex_count(), 0.0);  // H^{n-1}
  std::vector<double> h = rep.h1;                  // H^1
  std::vector<double> tmp(g.vertex_count(), 0.0);
  for (int n = 2; n <= n_max; ++n) {
    hm2 = hm1;
    hm1 = h;
    kernel_apply(g, p, hm1, tmp);
    for (Vertex v = 0; v < g.vertex_count(); ++v) h[v] = tmp[v] + rep.h1[v];
  }
  rep.h_n = h;
  rep.rate_raw.resize(g.vertex_count());
  rep.rate_diff2.resize(g.vertex_count());
  rep.h_top.resize(g.vertex_count());
  const WalkCountVector counts = walk_counts(g, n_max);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    rep.rate_raw[v] = h[v] / n_max;
    rep.rate_diff2[v] = n_max >= 3 ? 0.5 * (h[v] - hm2[v])
                      : n_max == 2 ? 0.5 * h[v]
                                   : h[v];
    rep.h_top[v] = counts.log_value(v) / n_max;
  }
  return rep;
}

TopEntropyDiag topological_entropy(const WeightedGraph& g, Vertex x, int n) {
  if (n < 2) throw std::invalid_argument("topological_entropy: need n >= 2");
  WalkCountVector w = walk_counts(g, n - 2);
  const double l2 = w.log_value(x);
  w = adjacency_sweep(g, w);
  const double l1 = w.log_value(x);
  w = adjacency_sweep(g, w);
  const double l0 = w.log_value(x);
  return {l0 / n, l0 - l1, 0.5 * (l0 - l2)};
}

TopEntropyDiag topological_entropy(const BallTruncation& ball, int shell, int n) {
  if (n < 2) throw std::invalid_argument("topological_entropy: need n >= 2");
  ball.require_window(shell, n);
  BallCounts bc(ball);
  bc.advance_to(n);
  const std::size_t i = bc.index_of_shell(shell);
  const double l0 = bc.counts(0).log_value(i);
  const double l1 = bc.counts(1).log_value(i);
  const double l2 = bc.counts(2).log_value(i);
  return {l0 / n, l0 - l1, 0.5 * (l0 - l2)};
}

std::vector<double> stationary_distribution(const WeightedGraph& g,
                                            const MarkovKernel& p, double tol,
                                            long max_iters) {
  p.require_supported_on(g);
  const Vertex n = g.vertex_count();
  std::vector<double> nu(n, 1.0 / n), next(n, 0.0);
  for (long it = 0; it < max_iters; ++it) {
    // next = nu (P + I)/2 via the transpose sweep
    for (Vertex v = 0; v < n; ++v) next[v] = 0.5 * nu[v] + 0.5 * p.loop(v) * nu[v];
    for (Vertex v = 0; v < n; ++v) {
      const auto nb = g.neighbors(v);
      const auto pr = p.row(v);
      const double mass = 0.5 * nu[v];
      for (std::size_t i = 0; i < nb.size(); ++i) next[nb[i]] += mass * pr[i];
    }
    double z = 0.0;
    for (double v : next) z += v;
    for (double& v : next) v /= z;
    // residual of the un-smoothed fixed point, in l1
    double res = 0.0;
    for (Vertex v = 0; v < n; ++v) res += std::abs(next[v] - nu[v]);
    nu.swap(next);
    if (2.0 * res <= tol) return nu;  // next - nu = (nu P - nu)/2
  }
  throw std::runtime_error("stationary_distribution: no convergence (non-irreducible kernel?)");
}

double kl_gap(const WeightedGraph& g, const MarkovKernel& p, const MerwReport& ref) {
  p.require_aligned(g);
  ref.kernel.require_aligned(g);
  const std::vector<double> nu = stationary_distribution(g, p);
  double gap = 0.0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    double gx = 0.0;
    if (p.loop(v) > 0.0) gx += p.loop(v) * std::log(p.loop(v) / ref.kernel.loop(v));
    const auto pr = p.row(v);
    const auto ur = ref.kernel.row(v);
    for (std::size_t i = 0; i < pr.size(); ++i) {
      if (pr[i] > 0.0) gx += pr[i] * std::log(pr[i] / ur[i]);
    }
    gap += nu[v] * gx;
  }
  return gap;
}

}  // namespace merw
