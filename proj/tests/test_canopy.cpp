#include <doctest.h>

#include <cmath>

#include "merw/canopy.hpp"
#include "oracles.hpp"

using namespace merw;

TEST_SUITE_BEGIN("canopy");

TEST_CASE("level chain is stochastic at every level, exactly") {
  const CanopyKernel k = canopy_kernel(3);
  for (long l = 1; l <= 1000; ++l) {
    CHECK(k.up(l) + k.down_total(l) == 1.0);
    CHECK(k.down_total(l) ==
          doctest::Approx((static_cast<double>(l) - 1.0) / (2.0 * l)));
  }
}

TEST_CASE("closed-form kernel values") {
  const CanopyKernel k = canopy_kernel(3);
  CHECK(k.up(1) == 1.0);
  CHECK(k.down_total(1) == 0.0);
  CHECK(k.up(2) == doctest::Approx(0.75));
  CHECK(k.down_total(2) == doctest::Approx(0.25));
  CHECK(k.down_per_child(2) == doctest::Approx(0.125));
  CHECK(k.energy() == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS(canopy_kernel(2), std::invalid_argument);
}

TEST_CASE("Doob identity against F(l) = l (d-1)^{l/2} up to level 1000") {
  for (int d : {3, 4, 6}) {
    const CanopyKernel k = canopy_kernel(d);
    const double log_rho = std::log(k.energy());
    for (long l : {1L, 2L, 5L, 50L, 1000L}) {
      CHECK(std::abs(std::log(k.up(l)) - (k.log_f(l + 1) - log_rho - k.log_f(l))) <= 1e-12);
      if (l >= 2) {
        CHECK(std::abs(std::log(k.down_per_child(l)) -
                       (k.log_f(l - 1) - log_rho - k.log_f(l))) <= 1e-12);
      }
    }
  }
}

TEST_CASE("level-1 ratio is exactly 1 at every n") {
  for (int n : {2, 3, 10, 101}) {
    const CanopyRatio r = canopy_ratio(3, 1, n);
    CHECK(r.up_raw == 1.0);
    CHECK(r.up_parity == 1.0);
    CHECK(r.down_raw == 0.0);
  }
}

TEST_CASE("level-2 parity-averaged ratio approaches 3/4") {
  const CanopyRatio r = canopy_ratio(3, 2, 2000);
  CHECK(std::abs(r.up_parity - 0.75) <= 1e-2);
  CHECK(std::abs(r.down_parity - 0.25) <= 1e-2);
  CHECK(r.up_limit == doctest::Approx(0.75));
  // stochasticity of the combined parity-averaged row
  CHECK(r.up_parity + r.down_parity == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(r.up_cauchy) <= 1e-3);
}

TEST_CASE("ratios tighten as n grows") {
  double prev = 1.0;
  for (int n : {50, 200, 1000}) {
    const CanopyRatio r = canopy_ratio(3, 3, n);
    const double err = std::abs(r.up_parity - r.up_limit);
    CHECK(err <= prev + 1e-12);
    prev = err;
  }
}

TEST_CASE("tridiagonal counts match brute force on the explicit truncation") {
  const int d = 3, L = 7;
  const WeightedGraph g = gen::canopy_trunc(d, L);
  BallCounts bc(BallTruncation::canopy_levels(d, L));
  // pick one representative vertex per level (counts are level-symmetric)
  for (int n = 1; n <= 6; ++n) {
    bc.advance();
    for (Vertex x = 0; x < g.vertex_count(); ++x) {
      const int level = g.labels().dist[x];
      if (level + n > L) continue;
      const double expect = oracle::enumerate_walk_count(g, x, n);
      const double got = std::exp(bc.counts(0).log_value(bc.index_of_shell(level)));
      CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("no finite stationary measure: partial sums diverge") {
  const double s1 = canopy_stationary_partial_sum(3, 1000);
  const double s2 = canopy_stationary_partial_sum(3, 10000);
  const double s3 = canopy_stationary_partial_sum(3, 100000);
  CHECK(s2 > 100.0 * s1 * 0.9);  // ~K^3 growth
  CHECK(s3 > 100.0 * s2 * 0.9);
}

TEST_CASE("monte-carlo trajectories: balanced steps, maximal entropy rate, transience") {
  const double target = std::log(2.0 * std::sqrt(2.0));
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const CanopyTrajectory t = simulate_canopy(3, 1'000'000, seed);
    CHECK(std::abs(t.up_frequency - 0.5) <= 0.01);
    CHECK(std::abs(t.entropy_rate - target) / target <= 0.01);
    CHECK(t.final_level > 100);
    CHECK(t.displacement_over_sqrt_n > 0.2);
    CHECK(t.displacement_over_sqrt_n < 10.0);
  }
}

TEST_CASE("simulation is deterministic in the seed") {
  const CanopyTrajectory a = simulate_canopy(3, 50'000, 99);
  const CanopyTrajectory b = simulate_canopy(3, 50'000, 99);
  CHECK(a.final_level == b.final_level);
  CHECK(a.entropy_rate == b.entropy_rate);
  const CanopyTrajectory c = simulate_canopy(3, 50'000, 100);
  CHECK(a.final_level != c.final_level);
}

TEST_SUITE_END();
