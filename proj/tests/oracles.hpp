#pragma once

// Test-side reference computations, kept independent of the library's own
// algorithms: a dense eigensolver, exhaustive walk enumeration, and a
// combinatorial lattice return-probability series.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "merw/graph.hpp"
#include "merw/markov.hpp"

namespace oracle {

// Dense symmetric eigensolve (Eigen). Returns eigenvalues ascending and the
// top eigenvector with positive sign convention, unit norm.
struct DenseSpectrum {
  std::vector<double> eigenvalues;
  std::vector<double> top_eigenvector;
  double rho() const { return eigenvalues.back(); }
  double lambda2() const { return eigenvalues[eigenvalues.size() - 2]; }
};
DenseSpectrum dense_spectrum(const merw::WeightedGraph& g);

// Exhaustive weighted walk counts by depth-first enumeration; feasible for
// tiny graphs and short walks only.
double enumerate_walk_count(const merw::WeightedGraph& g, merw::Vertex x, int n);

// Total weight of walks x -> y of length n.
double enumerate_walk_count_to(const merw::WeightedGraph& g, merw::Vertex x,
                               merw::Vertex y, int n);

// All length-n walks from x grouped by endpoint, carrying (p(w), a(w)).
struct BridgeClass {
  std::vector<double> p_over_a;  // one entry per walk
};
std::map<merw::Vertex, BridgeClass> enumerate_bridges(
    const merw::WeightedGraph& g, const merw::MarkovKernel& p, merw::Vertex x,
    int n);

// Z^3 return probabilities P_{2k}(0,0) through the trinomial identity
//   P_{2k} = C(2k,k) / 6^{2k} * sum_{i+j<=k} (k! / (i! j! (k-i-j)!))^2,
// summed in closed combinatorial form, plus a fitted n^{-3/2} tail. A
// different route than the library's binomial-mixture recursion.
double z3_green_origin_trinomial(int half_terms);

// classical simple-cubic lattice Green value f_oo(1/6) on Z^3
inline constexpr double kZ3GreenOrigin = 1.5163860591519780;

// Petersen graph: outer 5-cycle, spokes, inner pentagram.
merw::WeightedGraph petersen();

// Seeded connected Erdos-Renyi-style graph: random spanning tree plus extra
// random edges, unit weights.
merw::WeightedGraph random_connected(merw::Vertex n, double extra_edge_factor,
                                     std::uint64_t seed);

// Corpus of tiny graphs (<= 8 vertices) used by enumeration cross-checks;
// includes weighted and loop-carrying entries.
struct CorpusEntry {
  std::string name;
  merw::WeightedGraph graph;
};
std::vector<CorpusEntry> small_corpus();

// Random row-stochastic kernel supported exactly on g's edges and loops.
merw::MarkovKernel fuzz_kernel(const merw::WeightedGraph& g, std::uint64_t seed);

}  // namespace oracle
