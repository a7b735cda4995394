#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "merw/ball.hpp"
#include "merw/graph.hpp"
#include "merw/markov.hpp"

namespace merw {

// Nonnegative vector stored as value(i) = mant(i) * 2^(256 * exponent) with a
// shared exponent. W_n grows like rho^n and leaves double range near n ~ 700
// already for degree 4; the power-of-two base makes every renormalization an
// exact scaling, so the representation adds no rounding of its own.
class WalkCountVector {
 public:
  static constexpr int kBaseBits = 256;

  WalkCountVector() = default;
  static WalkCountVector ones(std::size_t size);

  std::size_t size() const { return mant_.size(); }
  int n() const { return n_; }
  // largest k such that entries at distance <= k are exact; -1 = everywhere
  int validity_radius() const { return validity_; }

  double mantissa(std::size_t i) const { return mant_[i]; }
  long exponent() const { return exp2_; }
  double log_value(std::size_t i) const;
  bool all_positive() const;

  // W_num(i) / W_den(j), exponents folded in exactly
  static double ratio(const WalkCountVector& num, std::size_t i,
                      const WalkCountVector& den, std::size_t j);

  std::vector<double>& raw() { return mant_; }
  const std::vector<double>& raw() const { return mant_; }
  void set_meta(int n, int validity) { n_ = n; validity_ = validity; }
  void set_exponent(long e) { exp2_ = e; }
  // rescale so the max mantissa lands in [1, 2^256)
  void renormalize();

 private:
  std::vector<double> mant_;
  long exp2_ = 0;
  int n_ = 0;
  int validity_ = -1;
};

// W_n(x) = <1_x, A^n 1>: n iterated row sweeps from the all-ones vector.
WalkCountVector walk_counts(const WeightedGraph& g, int n);

// One application of the adjacency row sweep (exposed so the recursion
// W_n = A W_{n-1} can be re-verified independently).
WalkCountVector adjacency_sweep(const WeightedGraph& g, const WalkCountVector& v);

// Iterated exact counts over a ball truncation. Tree and canopy balls run on
// their shell/level projection (the automorphism group is transitive on
// shells, so this is exact); lattice balls run on the explicit box.
// Indexing: shell/level for tree/canopy, flattened box site for lattice.
class BallCounts {
 public:
  explicit BallCounts(const BallTruncation& ball);

  const BallTruncation& ball() const { return ball_; }
  int n() const { return cur_.n(); }
  void advance();
  void advance_to(int n);

  // back = 0 -> W_n, 1 -> W_{n-1}, 2 -> W_{n-2}
  const WalkCountVector& counts(int back = 0) const;

  std::size_t index_of_shell(int shell) const;          // tree / canopy
  std::size_t index_of_site(std::span<const int> x) const;  // lattice

 private:
  void sweep(const WalkCountVector& src, WalkCountVector& dst) const;

  BallTruncation ball_;
  WalkCountVector cur_, prev_, prev2_;
  std::vector<long long> stride_;  // lattice box strides
};

// One row of the walk-count ratio estimate A_xy W_{n-1}(y) / W_n(x).
struct UrwRatio {
  int to = 0;            // target shell/level; lattice: +(axis+1) / -(axis+1)
  double weight = 1.0;   // A_xy (loop entries carry the loop weight)
  int multiplicity = 1;  // identical parallel neighbors (tree shells)
  double ratio_n = 0.0;
  double ratio_prev = 0.0;   // same at n-1
  double parity_avg = 0.0;   // (ratio_n + ratio_prev)/2, damps (-1)^n terms
  double cauchy_delta = 0.0; // ratio_n - ratio_prev
};

struct UrwEstimate {
  int n = 0;
  int at = 0;  // shell / level of the probed vertex
  std::vector<UrwRatio> row;
  double row_sum = 0.0;  // multiplicity-weighted sum of ratio_n
};

// Ratio-limit estimate of the URW row at a shell (tree/canopy). Requires
// n >= 2 and the exactness window at both n and the neighbor shells.
UrwEstimate urw_estimate(const BallTruncation& ball, int shell, int n);
// Lattice variant at an explicit site.
UrwEstimate urw_estimate(const BallTruncation& ball, std::span<const int> site, int n);

// Same-endpoint equal-length walks all carry the same probability-to-weight
// ratio for a Doob walk; the common per-edge energy is then
// sqrt(A_xy A_yx / (p_xy p_yx)).
struct DoobReport {
  bool is_doob = false;
  double energy = 0.0;           // median per-edge energy
  double energy_spread = 0.0;    // (max - min) / median over edges
  double max_bridge_discrepancy = 0.0;  // max |log p/a difference| over pairs
  long pairs_tested = 0;
};

// Bridge pairs are enumerated exhaustively up to length 6 (budget permitting)
// and sampled by endpoint bucketing beyond that.
DoobReport doob_check(const WeightedGraph& g, const MarkovKernel& p,
                      int max_len, long samples, std::uint64_t seed,
                      double tol = 1e-10);

}  // namespace merw
