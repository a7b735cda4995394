#pragma once

#include <string>
#include <vector>

#include "merw/graph.hpp"
#include "merw/markov.hpp"

namespace merw {

struct PowerIterOptions {
  double tol = 1e-12;       // residual ||A v - rho v||_2
  long max_iters = 1'000'000;
};

// Principal adjacency eigenpair of a connected graph. F is strictly
// positive and normalized to unit Euclidean norm.
struct PrincipalPair {
  double rho = 0.0;
  std::vector<double> eigvec;
  long iterations = 0;
  double residual = 0.0;
};

struct SpectralReport {
  double rho = 0.0;
  double lambda2 = 0.0;  // second-largest eigenvalue of A, by value
  double gap = 0.0;      // rho - lambda2
};

// Doob transform of the principal eigenpair: p_xy = A_xy F(y) / (rho F(x)),
// stationary measure pi ~ F^2, Kolmogorov-Sinai entropy
// -sum_x pi_x sum_y p_xy log(p_xy / A_xy).
struct MerwReport {
  double rho = 0.0;
  double lambda2 = 0.0;
  double gap = 0.0;
  double ks_entropy = 0.0;
  MarkovKernel kernel;
  std::vector<double> pi;
  PrincipalPair pair;

  // {rho, lambda2, gap, ks_entropy, kernel: CSR triplets, pi: array}
  std::string to_json(const WeightedGraph& g) const;
};

// Power iteration on A + D*I (the shift suppresses the period-2 oscillation
// of bipartite spectra), residual measured against A itself.
// Throws on disconnected input or when max_iters is hit.
PrincipalPair principal_pair(const WeightedGraph& g, PowerIterOptions opt = {});

// lambda2 by power iteration deflated against the principal component.
SpectralReport second_eigenvalue(const WeightedGraph& g, PowerIterOptions opt = {});

MerwReport merw(const WeightedGraph& g, PowerIterOptions opt = {});

}  // namespace merw
