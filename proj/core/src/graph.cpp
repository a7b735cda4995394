#include "merw/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "merw/rng.hpp"

namespace merw {

namespace {

void check_vertex(Vertex x, Vertex n, const char* what) {
  if (x < 0 || x >= n) {
    throw std::invalid_argument(std::string(what) + ": vertex " +
                                std::to_string(x) + " out of range [0, " +
                                std::to_string(n) + ")");
  }
}

}  // namespace

WeightedGraph::WeightedGraph(Vertex n, std::vector<Edge> edges,
                             std::vector<double> loops, VertexLabels labels)
    : n_(n), labels_(std::move(labels)) {
  if (n <= 0) throw std::invalid_argument("graph: vertex count must be positive");
  if (!loops.empty() && static_cast<Vertex>(loops.size()) != n) {
    throw std::invalid_argument("graph: loop vector size mismatch");
  }
  for (const Edge& e : edges) {
    check_vertex(e.u, n, "graph edge");
    check_vertex(e.v, n, "graph edge");
    if (e.u == e.v) {
      throw std::invalid_argument("graph: diagonal entries go in the loop vector");
    }
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw std::invalid_argument("graph: edge weights must be positive and finite");
    }
  }
  loops_ = loops.empty() ? std::vector<double>(n, 0.0) : std::move(loops);
  for (double s : loops_) {
    if (s < 0.0 || !std::isfinite(s)) {
      throw std::invalid_argument("graph: loop weights must be >= 0 and finite");
    }
  }

  off_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : edges) {
    ++off_[static_cast<std::size_t>(e.u) + 1];
    ++off_[static_cast<std::size_t>(e.v) + 1];
  }
  std::partial_sum(off_.begin(), off_.end(), off_.begin());
  nbr_.resize(off_[n]);
  wt_.resize(off_[n]);
  std::vector<std::size_t> cursor(off_.begin(), off_.end() - 1);
  for (const Edge& e : edges) {
    nbr_[cursor[e.u]] = e.v;
    wt_[cursor[e.u]++] = e.w;
    nbr_[cursor[e.v]] = e.u;
    wt_[cursor[e.v]++] = e.w;
  }
  for (Vertex x = 0; x < n; ++x) {
    const std::size_t b = off_[x], e = off_[x + 1];
    std::vector<std::pair<Vertex, double>> row;
    row.reserve(e - b);
    for (std::size_t i = b; i < e; ++i) row.emplace_back(nbr_[i], wt_[i]);
    std::sort(row.begin(), row.end());
    for (std::size_t i = 1; i < row.size(); ++i) {
      if (row[i].first == row[i - 1].first) {
        throw std::invalid_argument("graph: parallel edge at (" +
                                    std::to_string(x) + ", " +
                                    std::to_string(row[i].first) + ")");
      }
    }
    for (std::size_t i = b; i < e; ++i) {
      nbr_[i] = row[i - b].first;
      wt_[i] = row[i - b].second;
    }
  }

  wdeg_.assign(n, 0.0);
  d_bound_ = 0.0;
  for (Vertex x = 0; x < n; ++x) {
    double s = loops_[x];
    for (std::size_t i = off_[x]; i < off_[x + 1]; ++i) s += wt_[i];
    wdeg_[x] = s;
    if (loops_[x] > 0.0) has_loops_ = true;
    const double comb = static_cast<double>(degree(x));
    d_bound_ = std::max({d_bound_, comb, s});
  }

  // connectivity by traversal (loops do not connect anything)
  std::vector<char> seen(n, 0);
  std::deque<Vertex> queue{0};
  seen[0] = 1;
  Vertex reached = 1;
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop_front();
    for (Vertex y : neighbors(x)) {
      if (!seen[y]) {
        seen[y] = 1;
        ++reached;
        queue.push_back(y);
      }
    }
  }
  connected_ = (reached == n);

  if (!labels_.dist.empty() &&
      static_cast<Vertex>(labels_.dist.size()) != n) {
    throw std::invalid_argument("graph: dist label size mismatch");
  }
}

double WeightedGraph::edge_weight(Vertex x, Vertex y) const {
  check_vertex(x, n_, "edge_weight");
  check_vertex(y, n_, "edge_weight");
  const auto nb = neighbors(x);
  const auto it = std::lower_bound(nb.begin(), nb.end(), y);
  if (it == nb.end() || *it != y) return 0.0;
  return wt_[off_[x] + static_cast<std::size_t>(it - nb.begin())];
}

int WeightedGraph::degree(Vertex x) const {
  return static_cast<int>(off_[x + 1] - off_[x]) + (loops_[x] > 0.0 ? 1 : 0);
}

std::vector<int> WeightedGraph::distances_from(Vertex s) const {
  check_vertex(s, n_, "distances_from");
  const Vertex src[1] = {s};
  return distances_from(std::span<const Vertex>(src, 1));
}

std::vector<int> WeightedGraph::distances_from(
    std::span<const Vertex> sources) const {
  std::vector<int> dist(n_, -1);
  std::deque<Vertex> queue;
  for (Vertex s : sources) {
    check_vertex(s, n_, "distances_from");
    if (dist[s] < 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop_front();
    for (Vertex y : neighbors(x)) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

WeightedGraph perturb_loops(const WeightedGraph& g, const LoopSpec& spec) {
  if (spec.sigma < 0.0 || !std::isfinite(spec.sigma)) {
    throw std::invalid_argument("perturb_loops: sigma must be >= 0 and finite");
  }
  std::vector<double> loops(g.vertex_count());
  for (Vertex x = 0; x < g.vertex_count(); ++x) loops[x] = g.loop(x);
  for (Vertex x : spec.support) {
    check_vertex(x, g.vertex_count(), "perturb_loops support");
    loops[x] += spec.sigma;
  }
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    const auto nb = g.neighbors(x);
    const auto w = g.edge_weights(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (x < nb[i]) edges.push_back({x, nb[i], w[i]});
    }
  }
  return WeightedGraph(g.vertex_count(), std::move(edges), std::move(loops),
                       g.labels());
}

// --- generators ---------------------------------------------------------

namespace gen {

WeightedGraph cycle(Vertex n) {
  if (n < 3) throw std::invalid_argument("cycle: need n >= 3");
  std::vector<Edge> edges;
  edges.reserve(n);
  for (Vertex i = 0; i < n; ++i) edges.push_back({i, static_cast<Vertex>((i + 1) % n), 1.0});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph path(Vertex n) {
  if (n < 2) throw std::invalid_argument("path: need n >= 2");
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (Vertex i = 0; i + 1 < n; ++i) edges.push_back({i, static_cast<Vertex>(i + 1), 1.0});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph complete(Vertex n) {
  if (n < 2) throw std::invalid_argument("complete: need n >= 2");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph random_regular(Vertex n, int d, std::uint64_t seed) {
  if (n <= 0 || d <= 0) throw std::invalid_argument("random_regular: n, d must be positive");
  if (d >= n) throw std::invalid_argument("random_regular: need d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0) {
    throw std::invalid_argument("random_regular: n*d must be even");
  }
  constexpr int kMaxRestarts = 200000;
  Rng rng(seed);
  std::vector<Vertex> stubs(static_cast<std::size_t>(n) * d);
  for (Vertex x = 0; x < n; ++x)
    for (int k = 0; k < d; ++k) stubs[static_cast<std::size_t>(x) * d + k] = x;

  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    rng.shuffle(stubs);
    std::vector<std::vector<Vertex>> adj(n);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size() && ok; i += 2) {
      const Vertex a = stubs[i], b = stubs[i + 1];
      if (a == b) { ok = false; break; }
      auto& row = adj[std::min(a, b)];
      if (std::find(row.begin(), row.end(), std::max(a, b)) != row.end()) {
        ok = false;
        break;
      }
      row.push_back(std::max(a, b));
    }
    if (!ok) continue;
    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);
    for (Vertex x = 0; x < n; ++x)
      for (Vertex y : adj[x]) edges.push_back({x, y, 1.0});
    WeightedGraph g(n, std::move(edges));
    if (g.connected()) return g;
  }
  throw std::runtime_error("random_regular: rejection budget exceeded");
}

WeightedGraph tree_ball(int d, int radius) {
  if (d < 2) throw std::invalid_argument("tree_ball: need d >= 2");
  if (radius < 0) throw std::invalid_argument("tree_ball: need radius >= 0");
  // vertex count 1 + d + d(d-1) + ... + d(d-1)^(radius-1)
  long long count = 1, shell = d;
  for (int r = 1; r <= radius; ++r) {
    count += shell;
    shell *= (d - 1);
    if (count > 20'000'000) throw std::invalid_argument("tree_ball: too large to materialize");
  }
  const Vertex n = static_cast<Vertex>(count);
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  VertexLabels labels;
  labels.center = 0;
  labels.dist.assign(n, 0);
  Vertex next = 1;
  std::vector<Vertex> frontier{0};
  for (int r = 1; r <= radius; ++r) {
    std::vector<Vertex> nf;
    for (Vertex parent : frontier) {
      const int children = (r == 1) ? d : d - 1;
      for (int c = 0; c < children; ++c) {
        edges.push_back({parent, next, 1.0});
        labels.dist[next] = r;
        nf.push_back(next);
        ++next;
      }
    }
    frontier = std::move(nf);
  }
  return WeightedGraph(n, std::move(edges), {}, std::move(labels));
}

WeightedGraph lattice_box(int dim, int side) {
  if (dim < 1) throw std::invalid_argument("lattice_box: need dim >= 1");
  if (side < 2) throw std::invalid_argument("lattice_box: need side >= 2");
  long long count = 1;
  for (int k = 0; k < dim; ++k) {
    count *= side;
    if (count > 20'000'000) throw std::invalid_argument("lattice_box: too large");
  }
  const Vertex n = static_cast<Vertex>(count);
  std::vector<Edge> edges;
  VertexLabels labels;
  labels.coord_dim = dim;
  labels.coords.assign(static_cast<std::size_t>(n) * dim, 0);
  std::vector<long long> stride(dim, 1);
  for (int k = 1; k < dim; ++k) stride[k] = stride[k - 1] * side;
  std::vector<int> c(dim, 0);
  for (Vertex x = 0; x < n; ++x) {
    for (int k = 0; k < dim; ++k) {
      labels.coords[static_cast<std::size_t>(x) * dim + k] = c[k];
      if (c[k] + 1 < side) {
        edges.push_back({x, static_cast<Vertex>(x + stride[k]), 1.0});
      }
    }
    for (int k = 0; k < dim; ++k) {
      if (++c[k] < side) break;
      c[k] = 0;
    }
  }
  // midpoint as distinguished center, L1 distances as labels
  Vertex center = 0;
  for (int k = 0; k < dim; ++k) center += static_cast<Vertex>((side / 2) * stride[k]);
  labels.center = center;
  labels.dist.assign(n, 0);
  for (Vertex x = 0; x < n; ++x) {
    int dist = 0;
    for (int k = 0; k < dim; ++k) {
      dist += std::abs(labels.coords[static_cast<std::size_t>(x) * dim + k] - side / 2);
    }
    labels.dist[x] = dist;
  }
  return WeightedGraph(n, std::move(edges), {}, std::move(labels));
}

WeightedGraph canopy_trunc(int d, int levels) {
  if (d < 3) throw std::invalid_argument("canopy_trunc: need d >= 3");
  if (levels < 1) throw std::invalid_argument("canopy_trunc: need levels >= 1");
  // level `levels` holds the single root; level k holds (d-1)^(levels-k)
  long long count = 0, width = 1;
  for (int k = levels; k >= 1; --k) {
    count += width;
    width *= (d - 1);
    if (count > 20'000'000) throw std::invalid_argument("canopy_trunc: too large");
  }
  const Vertex n = static_cast<Vertex>(count);
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  VertexLabels labels;
  labels.center = 0;
  labels.dist.assign(n, 0);
  labels.dist[0] = levels;
  Vertex next = 1;
  std::vector<Vertex> frontier{0};
  for (int level = levels - 1; level >= 1; --level) {
    std::vector<Vertex> nf;
    for (Vertex parent : frontier) {
      for (int c = 0; c < d - 1; ++c) {
        edges.push_back({parent, next, 1.0});
        labels.dist[next] = level;
        nf.push_back(next);
        ++next;
      }
    }
    frontier = std::move(nf);
  }
  return WeightedGraph(n, std::move(edges), {}, std::move(labels));
}

}  // namespace gen

WeightedGraph generate(const FamilySpec& spec) {
  using K = FamilySpec::Kind;
  switch (spec.kind) {
    case K::cycle: return gen::cycle(spec.n);
    case K::path: return gen::path(spec.n);
    case K::complete: return gen::complete(spec.n);
    case K::random_regular: return gen::random_regular(spec.n, spec.d, spec.seed);
    case K::tree_ball: return gen::tree_ball(spec.d, spec.extent);
    case K::lattice_box: return gen::lattice_box(spec.dim, spec.extent);
    case K::canopy_trunc: return gen::canopy_trunc(spec.d, spec.extent);
  }
  throw std::invalid_argument("generate: unknown family");
}

// --- edge-list text format ------------------------------------------------

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", g.degree_bound());
  out << "n " << g.vertex_count() << " d-bound " << buf << "\n";
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    const auto nb = g.neighbors(x);
    const auto w = g.edge_weights(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (x < nb[i]) {
        std::snprintf(buf, sizeof buf, "%.17g", w[i]);
        out << x << " " << nb[i] << " " << buf << "\n";
      }
    }
  }
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    if (g.loop(x) > 0.0) {
      std::snprintf(buf, sizeof buf, "%.17g", g.loop(x));
      out << "loop " << x << " " << buf << "\n";
    }
  }
}

WeightedGraph read_edge_list(std::istream& in) {
  std::string tag;
  Vertex n = 0;
  std::string dtag;
  double declared_bound = 0.0;
  if (!(in >> tag >> n >> dtag >> declared_bound) || tag != "n" || dtag != "d-bound") {
    throw std::invalid_argument("edge list: bad header, expected 'n <count> d-bound <D>'");
  }
  std::vector<Edge> edges;
  std::vector<double> loops(static_cast<std::size_t>(n), 0.0);
  std::string first;
  while (in >> first) {
    if (first == "loop") {
      Vertex x;
      double w;
      if (!(in >> x >> w)) throw std::invalid_argument("edge list: bad loop line");
      check_vertex(x, n, "edge list loop");
      loops[x] += w;
    } else {
      Vertex y;
      double w;
      const Vertex x = static_cast<Vertex>(std::stol(first));
      if (!(in >> y >> w)) throw std::invalid_argument("edge list: bad edge line");
      edges.push_back({x, y, w});
    }
  }
  WeightedGraph g(n, std::move(edges), std::move(loops));
  if (g.degree_bound() > declared_bound * (1.0 + 1e-12) + 1e-12) {
    throw std::invalid_argument("edge list: declared d-bound exceeded");
  }
  return g;
}

WeightedGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open graph file: " + path);
  return read_edge_list(in);
}

void write_edge_list_file(const std::string& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write graph file: " + path);
  write_edge_list(out, g);
}

}  // namespace merw
