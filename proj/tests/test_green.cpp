#include <doctest.h>

#include <cmath>

#include "merw/green.hpp"
#include "oracles.hpp"

using namespace merw;

TEST_SUITE_BEGIN("green");

TEST_CASE("tree d=4 at t = 1/4: diagonal 3/2, distance 1 value 1/2") {
  const TreeGreen g(4);
  CHECK(g.f(0.25, 0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(g.f(0.25, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(g.h(0.25) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("tree fixed point h (1 - q t^2 h) = 1 across the domain") {
  for (int d : {3, 4, 5, 8}) {
    const TreeGreen g(d);
    const double q = d - 1.0;
    const double bp = g.branch_point();
    for (int i = 0; i <= 50; ++i) {
      const double t = bp * i / 50.0;
      const double h = g.h(t);
      CHECK(std::abs(h * (1.0 - q * t * t * h) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("tree rejects t beyond the branch point") {
  const TreeGreen g(4);
  CHECK_THROWS_AS(g.h(g.branch_point() * 1.01), std::invalid_argument);
  CHECK_THROWS_AS(g.f(-0.1, 0), std::invalid_argument);
}

TEST_CASE("lattice Z^3 diagonal at the SRW point") {
  const LatticeGreen g(3);
  const auto v = g.f_origin(1.0 / 6.0);
  // classical value, and the independent trinomial-route oracle
  CHECK(std::abs(v.value - oracle::kZ3GreenOrigin) <= v.error_bound + 1e-6);
  CHECK(std::abs(v.value - oracle::kZ3GreenOrigin) <= 1e-3);
  const double trinomial = oracle::z3_green_origin_trinomial(400);
  CHECK(std::abs(v.value - trinomial) <= 1e-2);
  CHECK(std::abs(trinomial - oracle::kZ3GreenOrigin) <= 1e-3);
}

TEST_CASE("lattice series is monotone in the truncation") {
  const LatticeGreen g1(3, 1000);
  const LatticeGreen g2(3, 2000);
  const LatticeGreen g3(3, 4000);
  // partial sums without tails increase with N; with the fitted tail the
  // values must agree within the reported bounds
  const auto v1 = g1.f_origin(1.0 / 6.0);
  const auto v3 = g3.f_origin(1.0 / 6.0);
  CHECK(std::abs(v1.value - v3.value) <= v1.error_bound + v3.error_bound);
  double partial1 = 0.0, partial2 = 0.0;
  for (int n = 0; n <= 1000; ++n) partial1 += g1.return_probs()[n];
  for (int n = 0; n <= 2000; ++n) partial2 += g2.return_probs()[n];
  CHECK(partial2 > partial1);
}

TEST_CASE("lattice geometric regime below the SRW point") {
  const LatticeGreen g(2, 2000);
  // Z^2 diagonal converges for t < 1/4; compare against a direct box sweep
  const double t = 0.2;
  const auto v = g.f_origin(t);
  // independent evaluation from the materialized box: sum_n (A^n)_{oo} t^n
  const WeightedGraph box = gen::lattice_box(2, 41);
  const Vertex o = box.labels().center;
  std::vector<double> vec(box.vertex_count(), 0.0), nxt(box.vertex_count(), 0.0);
  vec[o] = 1.0;
  double sum = 0.0, tp = 1.0;
  for (int n = 0; n <= 18; ++n) {  // walks of length <= 20 cannot leave the box
    sum += vec[o] * tp;
    tp *= t;
    for (Vertex x = 0; x < box.vertex_count(); ++x) {
      double s = 0.0;
      for (std::size_t i = 0; i < box.neighbors(x).size(); ++i) {
        s += vec[box.neighbors(x)[i]];
      }
      nxt[x] = s;
    }
    vec.swap(nxt);
  }
  // remaining terms bounded by the geometric envelope
  const double slack = std::pow(4.0 * t, 19.0) / (1.0 - 4.0 * t);
  CHECK(std::abs(v.value - sum) <= slack + v.error_bound);
}

TEST_CASE("lattice rejects out-of-range t and divergent diagonals") {
  const LatticeGreen g3(3, 1000);
  CHECK_THROWS_AS(g3.f_origin(0.2), std::invalid_argument);  // above 1/6
  const LatticeGreen g1(1, 1000);
  CHECK_THROWS_AS(g1.f_origin(0.5), std::invalid_argument);  // divergent at 1/2
  CHECK(g1.f_origin(0.4).value == doctest::Approx(1.0 / std::sqrt(1.0 - 4.0 * 0.16)).epsilon(1e-9));
}

TEST_CASE("lattice point values against the 1-d closed form") {
  // Z^1: f_ox(t) = f_oo(t) ((1 - sqrt(1-4t^2)) / 2t)^{|x|}
  const LatticeGreen g(1, 4000);
  const double t = 0.35;
  const double foo = 1.0 / std::sqrt(1.0 - 4.0 * t * t);
  const double step = (1.0 - std::sqrt(1.0 - 4.0 * t * t)) / (2.0 * t);
  for (int x : {1, 2, 5}) {
    const int pt[1] = {x};
    const auto v = g.f_point(t, std::span<const int>(pt, 1));
    CHECK(v.value == doctest::Approx(foo * std::pow(step, x)).epsilon(1e-9));
  }
}

TEST_CASE("loop perturbation obeys the rank-one resolvent identity") {
  // f^s_xy(t) = f_xy + f_xo s t f_oy / (1 - s t f_oo) for a loop s at o
  const WeightedGraph g = gen::random_regular(14, 3, 9);
  const Vertex o = 2;
  const double sigma = 1.75;
  const FiniteGreen base(g, o);
  const FiniteGreen pert(perturb_loops(g, {{o}, sigma}), o);
  for (double t : {0.05, 0.15, 0.25}) {
    for (Vertex x : {0, 2, 7}) {
      for (Vertex y : {1, 2, 11}) {
        const double foo = base.f(t, o, o);
        const double expect = base.f(t, x, y) + base.f(t, x, o) * sigma * t *
                                                    base.f(t, o, y) /
                                                    (1.0 - sigma * t * foo);
        CHECK(pert.f(t, x, y) == doctest::Approx(expect).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("finite green equals the dense resolvent") {
  const WeightedGraph g = oracle::petersen();
  const FiniteGreen fg(g, 0);
  CHECK(fg.rho() == doctest::Approx(3.0).epsilon(1e-10));
  const double t = 0.2;
  // Neumann series on the explicit graph as the oracle
  std::vector<double> vec(g.vertex_count(), 0.0), nxt(g.vertex_count(), 0.0);
  vec[4] = 1.0;
  double sum = 0.0, tp = 1.0;
  for (int n = 0; n <= 200; ++n) {  // terms decay like (rho t)^n = 0.6^n
    sum += vec[0] * tp;
    tp *= t;
    for (Vertex x = 0; x < g.vertex_count(); ++x) {
      double s = 0.0;
      for (Vertex y : g.neighbors(x)) s += vec[y];
      nxt[x] = s;
    }
    vec.swap(nxt);
  }
  CHECK(fg.f(t, 0, 4) == doctest::Approx(sum).epsilon(1e-10));
  CHECK_THROWS_AS(fg.f(0.4, 0, 0), std::invalid_argument);  // beyond 1/rho
}

TEST_SUITE_END();
