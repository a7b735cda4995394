#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "merw/graph.hpp"
#include "merw/markov.hpp"

namespace merw {

// Local observables of a kernel against the SRW reference: root-row total
// variation, depth-2 trajectory total variation, and the per-edge product
// statistic p_xy p_yx / (A_xy A_yx), which a Doob walk of energy rho pins at
// 1/rho^2 on every edge.
struct LocalStats {
  std::vector<Vertex> roots;
  std::vector<double> tv_to_srw;
  std::vector<double> tv2_to_srw;
  std::vector<std::pair<Vertex, Vertex>> edges;  // both endpoints in roots
  std::vector<double> edge_energy_stat;          // p_xy p_yx / (A_xy A_yx)
};

LocalStats local_stats(const WeightedGraph& g, const MarkovKernel& p,
                       std::span<const Vertex> roots);

enum class OmegaRule { single_site, iid };

struct SequenceConfig {
  int d = 4;
  std::vector<int> sizes;
  OmegaRule omega = OmegaRule::single_site;
  double iid_p = 0.0;      // iid rule: per-vertex loop probability
  double sigma = 0.0;
  std::vector<std::uint64_t> seeds;
  int threads = 1;
  double tol = 1e-12;
};

// One configuration-model instance: spectral data of the perturbed graph and
// kernel statistics at roots far from the loop set. "Far" means graph
// distance above floor(log_{d-1}(n) / 2), half the typical distance scale.
struct SequenceRecord {
  int n = 0;
  std::uint64_t seed = 0;
  double rho_n = 0.0;
  double lambda2_n = 0.0;  // second eigenvalue of the unperturbed graph
  double margin = 0.0;     // d - lambda2_n - sigma
  double tv_mean = 0.0;
  double tv_p95 = 0.0;
  double tv2_mean = 0.0;
  double energy_median = 0.0;  // median of p_xy p_yx at far edges
  double energy_iqr = 0.0;
  double predicted_rho = 0.0;  // rank-one rho_sigma (single-site rule only)
  double tv_pred_mean = 0.0;   // TV against rank-one predicted far rows
  double rho_lower_bound = 0.0;  // d + sigma |omega| / n
  int far_cutoff = 0;
  int far_roots = 0;
};

std::vector<SequenceRecord> sequence_experiment(const SequenceConfig& cfg);

}  // namespace merw
