#pragma once

#include <vector>

#include "merw/ball.hpp"
#include "merw/graph.hpp"
#include "merw/markov.hpp"
#include "merw/spectral.hpp"

namespace merw {

// Walk entropy H_P^n(x) = -sum over length-n walks from x of p(w) log(p(w)/a(w)),
// computed by the forward recursion H^n = P H^{n-1} + H^1 (never by walk
// enumeration). 0 log 0 = 0 throughout.
struct EntropyReport {
  int n_max = 0;
  std::vector<double> h1;         // one-step entropies
  std::vector<double> h_n;        // H^{n_max} per vertex
  std::vector<double> rate_raw;   // H^{n_max}(x) / n_max
  std::vector<double> rate_diff2; // (H^n - H^{n-2}) / 2: parity-robust rate
  std::vector<double> h_top;      // log W_{n_max}(x) / n_max
};

EntropyReport walk_entropy(const WeightedGraph& g, const MarkovKernel& p, int n_max);

struct TopEntropyDiag {
  double rate = 0.0;         // log W_n(x) / n
  double diff = 0.0;         // log(W_n / W_{n-1})
  double diff_parity = 0.0;  // log(W_n / W_{n-2}) / 2
};

TopEntropyDiag topological_entropy(const WeightedGraph& g, Vertex x, int n);
TopEntropyDiag topological_entropy(const BallTruncation& ball, int shell, int n);

// Stationary row vector of an arbitrary kernel by power iteration on the
// transpose. A half-lazy smoothing (P + I)/2 is applied inside the solver
// only, to defeat periodicity; the fixed point is unchanged. Throws when the
// chain fails to settle (non-irreducible input).
std::vector<double> stationary_distribution(const WeightedGraph& g,
                                            const MarkovKernel& p,
                                            double tol = 1e-12,
                                            long max_iters = 1'000'000);

// KL-gap functional: sum_x nu_x sum_y p_xy log(p_xy / u_xy) where nu is P's
// stationary measure and u the MERW reference rows. Non-negative; zero iff
// P equals the reference on the support of nu.
double kl_gap(const WeightedGraph& g, const MarkovKernel& p, const MerwReport& ref);

}  // namespace merw
