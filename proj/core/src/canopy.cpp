#include "merw/canopy.hpp"

#include <cmath>
#include <stdexcept>

#include "merw/rng.hpp"

namespace merw {

double CanopyKernel::energy() const {
  return 2.0 * std::sqrt(static_cast<double>(d - 1));
}

double CanopyKernel::log_f(long level) const {
  return std::log(static_cast<double>(level)) +
         0.5 * level * std::log(static_cast<double>(d - 1));
}

CanopyKernel canopy_kernel(int d) {
  if (d < 3) throw std::invalid_argument("canopy_kernel: need d >= 3");
  CanopyKernel k{d};
  // Doob identity: u_{l,l+1} = F(l+1) / (rho F(l)) and
  // u-child = F(l-1) / (rho F(l)), rho = 2 sqrt(d-1)
  const double log_rho = std::log(k.energy());
  for (long l : {1L, 2L, 3L, 10L, 100L, 1000L}) {
    const double up = std::log(k.up(l));
    const double up_doob = k.log_f(l + 1) - log_rho - k.log_f(l);
    if (std::abs(up - up_doob) > 1e-12) {
      throw std::logic_error("canopy_kernel: Doob identity violated (up)");
    }
    if (l >= 2) {
      const double down = std::log(k.down_per_child(l));
      const double down_doob = k.log_f(l - 1) - log_rho - k.log_f(l);
      if (std::abs(down - down_doob) > 1e-12) {
        throw std::logic_error("canopy_kernel: Doob identity violated (down)");
      }
    }
  }
  return k;
}

CanopyRatio canopy_ratio(int d, int level, int n) {
  if (d < 3) throw std::invalid_argument("canopy_ratio: need d >= 3");
  if (level < 1) throw std::invalid_argument("canopy_ratio: need level >= 1");
  if (n < 2) throw std::invalid_argument("canopy_ratio: need n >= 2");

  CanopyRatio out;
  out.d = d;
  out.level = level;
  out.n = n;
  out.levels = level + n;  // auto-sized exactness window

  const LevelOperator op{d, out.levels};
  const UrwEstimate est = urw_estimate(op.ball(), level, n);
  for (const UrwRatio& r : est.row) {
    if (r.to == level + 1) {
      out.up_raw = r.ratio_n;
      out.up_prev = r.ratio_prev;
      out.up_parity = r.parity_avg;
      out.up_cauchy = r.cauchy_delta;
    } else if (r.to == level - 1) {
      out.down_raw = r.multiplicity * r.ratio_n;
      out.down_prev = r.multiplicity * r.ratio_prev;
      out.down_parity = r.multiplicity * r.parity_avg;
    }
  }
  const CanopyKernel k{d};
  out.up_limit = k.up(level);
  out.down_limit = k.down_total(level);
  return out;
}

CanopyTrajectory simulate_canopy(int d, long steps, std::uint64_t seed,
                                 long start_level) {
  if (d < 3) throw std::invalid_argument("simulate_canopy: need d >= 3");
  if (steps < 1) throw std::invalid_argument("simulate_canopy: need steps >= 1");
  if (start_level < 1) throw std::invalid_argument("simulate_canopy: start level >= 1");

  const CanopyKernel kernel{d};
  Rng rng(seed);
  long level = start_level;
  long ups = 0;
  double entropy = 0.0;
  const double log_children = std::log(static_cast<double>(d - 1));
  for (long i = 0; i < steps; ++i) {
    const double up_p = kernel.up(level);
    if (rng.uniform() < up_p) {
      entropy -= std::log(up_p);
      ++ups;
      ++level;
    } else {
      // one specific child: probability (l-1)/(2l(d-1)) against unit weight
      entropy -= std::log(kernel.down_total(level)) - log_children;
      --level;
    }
  }
  CanopyTrajectory out;
  out.seed = seed;
  out.steps = steps;
  out.up_frequency = static_cast<double>(ups) / static_cast<double>(steps);
  out.entropy_rate = entropy / static_cast<double>(steps);
  out.final_level = level;
  out.displacement_over_sqrt_n =
      static_cast<double>(level - start_level) / std::sqrt(static_cast<double>(steps));
  return out;
}

double canopy_stationary_partial_sum(int d, long k_max) {
  if (d < 3) throw std::invalid_argument("canopy_stationary_partial_sum: need d >= 3");
  double s = 0.0;
  for (long k = 1; k <= k_max; ++k) {
    s += static_cast<double>(k) * static_cast<double>(k) * (d - 2);
    if (!std::isfinite(s)) break;
  }
  return s;
}

}  // namespace merw
