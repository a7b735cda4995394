#include <doctest.h>

#include <cmath>

#include "merw/spectral.hpp"
#include "oracles.hpp"

using namespace merw;

TEST_SUITE_BEGIN("spectral");

TEST_CASE("regular graphs: rho = d, constant eigenvector") {
  for (const WeightedGraph& g : {gen::complete(5), gen::cycle(8)}) {
    const PrincipalPair pp = principal_pair(g);
    const double d = g.weighted_degree(0);
    CHECK(pp.rho == doctest::Approx(d).epsilon(1e-12));
    const double expect = 1.0 / std::sqrt(static_cast<double>(g.vertex_count()));
    for (double f : pp.eigvec) CHECK(f == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("path P3: rho = sqrt(2), F ~ (1, sqrt 2, 1)") {
  const PrincipalPair pp = principal_pair(gen::path(3));
  CHECK(pp.rho == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
  CHECK(pp.eigvec[1] / pp.eigvec[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(pp.eigvec[2] == doctest::Approx(pp.eigvec[0]).epsilon(1e-9));
}

TEST_CASE("second eigenvalue against the dense oracle") {
  struct Case {
    WeightedGraph g;
    double expect;
  };
  const Case cases[] = {
      {gen::complete(5), -1.0},
      {gen::cycle(4), 0.0},
      {oracle::petersen(), 1.0},
  };
  for (const Case& c : cases) {
    const SpectralReport sr = second_eigenvalue(c.g);
    CHECK(sr.lambda2 == doctest::Approx(c.expect).epsilon(1e-9));
    const auto dense = oracle::dense_spectrum(c.g);
    CHECK(sr.lambda2 == doctest::Approx(dense.lambda2()).epsilon(1e-9));
    CHECK(sr.rho == doctest::Approx(dense.rho()).epsilon(1e-9));
    CHECK(sr.gap == doctest::Approx(sr.rho - sr.lambda2));
  }
}

TEST_CASE("small corpus matches the dense eigensolve oracle to 1e-9") {
  for (const auto& entry : oracle::small_corpus()) {
    INFO(entry.name);
    const auto dense = oracle::dense_spectrum(entry.graph);
    const PrincipalPair pp = principal_pair(entry.graph);
    CHECK(std::abs(pp.rho - dense.rho()) <= 1e-9);
    for (Vertex x = 0; x < entry.graph.vertex_count(); ++x) {
      CHECK(std::abs(pp.eigvec[x] - dense.top_eigenvector[x]) <= 1e-9);
    }
    // bounds: max row mean <= rho <= max weighted degree
    double max_row_mean = 0.0;
    for (Vertex x = 0; x < entry.graph.vertex_count(); ++x) {
      max_row_mean = std::max(
          max_row_mean, entry.graph.weighted_degree(x) / entry.graph.vertex_count());
    }
    CHECK(pp.rho >= max_row_mean - 1e-12);
    CHECK(pp.rho <= entry.graph.degree_bound() + 1e-12);
  }
}

TEST_CASE("merw on cycles is the simple random walk") {
  const MerwReport rep = merw::merw(gen::cycle(6));
  for (Vertex x = 0; x < 6; ++x) {
    for (double p : rep.kernel.row(x)) CHECK(std::abs(p - 0.5) <= 1e-10);
  }
  CHECK(rep.ks_entropy == doctest::Approx(std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("merw on P3: forced endpoints, ks = log sqrt 2") {
  const WeightedGraph g = gen::path(3);
  const MerwReport rep = merw::merw(g);
  CHECK(rep.kernel.prob(g, 0, 1) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(rep.kernel.prob(g, 1, 0) == doctest::Approx(0.5).epsilon(1e-11));
  CHECK(rep.kernel.prob(g, 1, 2) == doctest::Approx(0.5).epsilon(1e-11));
  CHECK(rep.pi[0] == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(rep.pi[1] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(rep.ks_entropy == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("merw invariants across the corpus") {
  for (const auto& entry : oracle::small_corpus()) {
    INFO(entry.name);
    const WeightedGraph& g = entry.graph;
    const MerwReport rep = merw::merw(g);
    double pi_sum = 0.0;
    for (Vertex x = 0; x < g.vertex_count(); ++x) {
      CHECK(std::abs(rep.kernel.row_sum(x) - 1.0) <= 1e-12);
      pi_sum += rep.pi[x];
    }
    CHECK(std::abs(pi_sum - 1.0) <= 1e-12);
    // reversibility through every edge
    for (Vertex x = 0; x < g.vertex_count(); ++x) {
      for (Vertex y : g.neighbors(x)) {
        CHECK(std::abs(rep.pi[x] * rep.kernel.prob(g, x, y) -
                       rep.pi[y] * rep.kernel.prob(g, y, x)) <= 1e-12);
      }
    }
    CHECK(std::abs(rep.ks_entropy - std::log(rep.rho)) <= 1e-8);
  }
}

TEST_CASE("merw on a 4-regular graph collapses to SRW") {
  const WeightedGraph g = gen::random_regular(64, 4, 2);
  const MerwReport rep = merw::merw(g);
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    for (double p : rep.kernel.row(x)) CHECK(std::abs(p - 0.25) <= 1e-10);
  }
}

TEST_CASE("errors: disconnected input, bad tolerance, iteration cap") {
  const WeightedGraph split(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  CHECK_THROWS_AS(principal_pair(split), std::invalid_argument);
  CHECK_THROWS_AS(principal_pair(gen::cycle(5), {.tol = 0.0}), std::invalid_argument);
  PowerIterOptions tiny;
  tiny.max_iters = 1;
  tiny.tol = 1e-15;
  CHECK_THROWS_AS(principal_pair(gen::path(5), tiny), std::runtime_error);
}

TEST_CASE("merw report serializes to json") {
  const WeightedGraph g = gen::path(3);
  const std::string js = merw::merw(g).to_json(g);
  CHECK(js.find("\"rho\":") != std::string::npos);
  CHECK(js.find("\"lambda2\":") != std::string::npos);
  CHECK(js.find("\"kernel\":[[") != std::string::npos);
  CHECK(js.find("\"pi\":[") != std::string::npos);
}

TEST_SUITE_END();
