#pragma once

#include <cstdint>
#include <vector>

#include "merw/ball.hpp"
#include "merw/walk_counts.hpp"

namespace merw {

// Level projection of the d-regular canopy tree. Levels are graded by the
// distance to the leaf set (leaves at level 1); the adjacency projects to the
// tridiagonal operator B with B[k, k+1] = 1 and B[k+1, k] = d - 1, which is
// exact because the automorphism group is transitive on each level.
struct LevelOperator {
  int d = 3;
  int levels = 0;  // truncation: counts of length n from level k exact iff k + n <= levels

  BallTruncation ball() const { return BallTruncation::canopy_levels(d, levels); }
};

// Closed-form URW of the canopy tree: the level chain moves up with
// probability (l+1)/2l and splits (l-1)/2l uniformly over the d-1 children.
// It is the Doob transform of the SRW step weights by F(l) = l (d-1)^{l/2}
// at energy 2 sqrt(d-1).
struct CanopyKernel {
  int d = 3;

  double up(long level) const {
    return (level + 1.0) / (2.0 * level);
  }
  double down_total(long level) const {
    return (level - 1.0) / (2.0 * level);
  }
  double down_per_child(long level) const {
    return (level - 1.0) / (2.0 * level * (d - 1));
  }
  double energy() const;              // 2 sqrt(d-1)
  double log_f(long level) const;     // log F(level)
};

// Validates the Doob identity u =.F-transform at construction; d >= 3.
CanopyKernel canopy_kernel(int d);

struct CanopyRatio {
  int d = 0, level = 0, n = 0, levels = 0;
  double up_raw = 0, up_prev = 0, up_parity = 0, up_cauchy = 0;
  double down_raw = 0, down_prev = 0, down_parity = 0;  // aggregated children
  double up_limit = 0, down_limit = 0;  // closed-form targets
};

// Exact tridiagonal walk-count ratios at a level; the truncation is sized
// automatically to keep the window exact. The raw ratios carry the (-1)^(n+k)
// oscillation, hence the parity averages.
CanopyRatio canopy_ratio(int d, int level, int n);

struct CanopyTrajectory {
  std::uint64_t seed = 0;
  long steps = 0;
  double up_frequency = 0.0;
  double entropy_rate = 0.0;  // (1/n) sum of -log(u_step / a_step)
  long final_level = 0;
  double displacement_over_sqrt_n = 0.0;
};

// Monte-Carlo run of the level birth-death chain. A downward step spends
// log(d-1) of walk weight on the child choice, so the entropy estimate
// matches the weighted convention on the unprojected tree.
CanopyTrajectory simulate_canopy(int d, long steps, std::uint64_t seed,
                                 long start_level = 1);

// Partial sums sum_{k<=K} F(k)^2 p_k of the formal stationary measure against
// the level weights p_k = (d-2)(d-1)^{-k}; each term is k^2 (d-2), so the
// sums grow without bound and no finite stationary measure exists.
double canopy_stationary_partial_sum(int d, long k_max);

}  // namespace merw
