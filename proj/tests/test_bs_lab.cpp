#include <doctest.h>

#include <cmath>

#include "merw/bs_lab.hpp"
#include "merw/rng.hpp"
#include "merw/spectral.hpp"
#include "oracles.hpp"

using namespace merw;

TEST_SUITE_BEGIN("bs-lab");

TEST_CASE("local stats: SRW rows have zero TV everywhere") {
  const WeightedGraph g = gen::random_regular(60, 4, 2);
  std::vector<Vertex> roots;
  for (Vertex x = 0; x < g.vertex_count(); ++x) roots.push_back(x);
  const LocalStats stats = local_stats(g, srw_kernel(g), roots);
  for (double tv : stats.tv_to_srw) CHECK(tv == 0.0);
  for (double tv : stats.tv2_to_srw) CHECK(tv == 0.0);
  for (double e : stats.edge_energy_stat) CHECK(e == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("local stats: merw of an unperturbed regular graph collapses") {
  const WeightedGraph g = gen::random_regular(60, 3, 5);
  const MerwReport rep = merw::merw(g);
  std::vector<Vertex> roots{0, 5, 17, 44};
  const LocalStats stats = local_stats(g, rep.kernel, roots);
  for (double tv : stats.tv_to_srw) CHECK(tv <= 1e-10);
}

TEST_CASE("local stats on merw(P4): endpoints forced, inner rows |1/phi^2 - 1/2|") {
  const WeightedGraph g = gen::path(4);
  const MerwReport rep = merw::merw(g);
  std::vector<Vertex> roots{0, 1, 2, 3};
  const LocalStats stats = local_stats(g, rep.kernel, roots);
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  CHECK(stats.tv_to_srw[0] <= 1e-11);
  CHECK(stats.tv_to_srw[3] <= 1e-11);
  const double expect = std::abs(1.0 / (phi * phi) - 0.5);
  CHECK(stats.tv_to_srw[1] == doctest::Approx(expect).epsilon(1e-9));
  CHECK(stats.tv_to_srw[2] == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("harmonic-arithmetic rigidity: sum 1/(d^2 p) >= 1, equality only uniform") {
  Rng rng(11);
  const int d = 4;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p(d);
    double sum = 0.0;
    for (double& v : p) {
      v = 0.05 + rng.uniform();
      sum += v;
    }
    for (double& v : p) v /= sum;
    double stat = 0.0;
    for (double v : p) stat += 1.0 / (d * d * v);
    CHECK(stat >= 1.0 - 1e-12);
    double spread = 0.0;
    for (double v : p) spread = std::max(spread, std::abs(v - 1.0 / d));
    if (stat < 1.0 + 1e-10) CHECK(spread <= 1e-4);
  }
  // uniform rows sit exactly at the equality case
  std::vector<double> uniform(d, 1.0 / d);
  double stat = 0.0;
  for (double v : uniform) stat += 1.0 / (d * d * v);
  CHECK(stat == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sigma = 0: merw equals srw at every size, tv identically zero") {
  SequenceConfig cfg;
  cfg.d = 4;
  cfg.sizes = {64, 128};
  cfg.sigma = 0.0;
  cfg.seeds = {1, 2};
  const auto records = sequence_experiment(cfg);
  REQUIRE(records.size() == 4);
  for (const auto& r : records) {
    CHECK(r.tv_mean <= 1e-10);
    CHECK(r.tv_p95 <= 1e-10);
    CHECK(r.rho_n == doctest::Approx(4.0).epsilon(1e-11));
  }
}

TEST_CASE("trace lower bound rho_n >= d + sigma |omega| / n") {
  SequenceConfig cfg;
  cfg.d = 4;
  cfg.sizes = {100, 200};
  cfg.sigma = 2.0;
  cfg.seeds = {3};
  for (OmegaRule rule : {OmegaRule::single_site, OmegaRule::iid}) {
    cfg.omega = rule;
    cfg.iid_p = 0.05;
    for (const auto& r : sequence_experiment(cfg)) {
      CHECK(r.rho_n >= r.rho_lower_bound - 1e-10);
    }
  }
}

TEST_CASE("membrane regime: margin-positive sequences contract to the predicted rows") {
  // random 4-regular graphs have lambda2 near 2 sqrt(3); sigma = 0.3 keeps
  // d - lambda2 - sigma positive
  SequenceConfig cfg;
  cfg.d = 4;
  cfg.sizes = {250, 500, 1000};
  cfg.sigma = 0.3;
  cfg.seeds = {1, 2, 3};
  cfg.threads = 2;
  const auto records = sequence_experiment(cfg);
  std::vector<double> tv_by_size, tv_pred_by_size;
  for (std::size_t s = 0; s < cfg.sizes.size(); ++s) {
    double tv = 0.0, tvp = 0.0;
    for (std::size_t j = 0; j < cfg.seeds.size(); ++j) {
      const auto& r = records[s * cfg.seeds.size() + j];
      tv += r.tv_mean;
      tvp += r.tv_pred_mean;
      CHECK(r.margin > 0.0);
      CHECK(r.far_roots > 0);
    }
    tv_by_size.push_back(tv / cfg.seeds.size());
    tv_pred_by_size.push_back(tvp / cfg.seeds.size());
  }
  CHECK(tv_by_size[1] < tv_by_size[0]);
  CHECK(tv_by_size[2] < tv_by_size[1]);
  CHECK(tv_pred_by_size[2] < tv_pred_by_size[0]);
}

TEST_CASE("subcritical sigma = 1: far rows approach srw even without the margin") {
  SequenceConfig cfg;
  cfg.d = 4;
  cfg.sizes = {250, 500, 1000};
  cfg.sigma = 1.0;
  cfg.seeds = {1, 2};
  cfg.threads = 2;
  const auto records = sequence_experiment(cfg);
  std::vector<double> tv_by_size;
  for (std::size_t s = 0; s < cfg.sizes.size(); ++s) {
    double tv = 0.0;
    for (std::size_t j = 0; j < cfg.seeds.size(); ++j) {
      tv += records[s * cfg.seeds.size() + j].tv_mean;
    }
    tv_by_size.push_back(tv / cfg.seeds.size());
  }
  CHECK(tv_by_size[1] < tv_by_size[0]);
  CHECK(tv_by_size[2] < tv_by_size[1]);
  CHECK(tv_by_size[2] <= 0.05);
}

TEST_CASE("localized regime: rho_n tracks the rank-one prediction, energies pin 1/rho^2") {
  SequenceConfig cfg;
  cfg.d = 4;
  cfg.sizes = {600};
  cfg.sigma = 4.0;
  cfg.seeds = {1, 2};
  cfg.threads = 2;
  const auto records = sequence_experiment(cfg);
  for (const auto& r : records) {
    CHECK(std::abs(r.rho_n - r.predicted_rho) / r.predicted_rho <= 0.02);
    CHECK(std::abs(r.energy_median - 1.0 / (r.rho_n * r.rho_n)) <= 1e-12);
    CHECK(r.energy_iqr <= 1e-12);  // merw is an exact Doob walk
    CHECK(r.margin < 0.0);
  }
}

TEST_CASE("iid loop rule is exploratory but well-formed") {
  SequenceConfig cfg;
  cfg.d = 4;
  cfg.sizes = {200};
  cfg.omega = OmegaRule::iid;
  cfg.iid_p = 0.1;
  cfg.sigma = 0.5;
  cfg.seeds = {5};
  const auto records = sequence_experiment(cfg);
  REQUIRE(records.size() == 1);
  CHECK(records[0].rho_n >= 4.0);
  CHECK(records[0].far_roots > 0);
  CHECK(std::isfinite(records[0].tv_mean));
}

TEST_CASE("records are independent of the worker count") {
  SequenceConfig cfg;
  cfg.d = 4;
  cfg.sizes = {80, 160};
  cfg.sigma = 2.0;
  cfg.seeds = {1, 2};
  cfg.threads = 1;
  const auto serial = sequence_experiment(cfg);
  cfg.threads = 4;
  const auto parallel = sequence_experiment(cfg);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].rho_n == parallel[i].rho_n);
    CHECK(serial[i].tv_mean == parallel[i].tv_mean);
    CHECK(serial[i].energy_median == parallel[i].energy_median);
  }
}

TEST_CASE("config validation") {
  SequenceConfig cfg;
  cfg.sizes = {100, 50};
  cfg.seeds = {1};
  CHECK_THROWS_AS(sequence_experiment(cfg), std::invalid_argument);
  cfg.sizes = {};
  CHECK_THROWS_AS(sequence_experiment(cfg), std::invalid_argument);
}

TEST_SUITE_END();
