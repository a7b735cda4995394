#include "merw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "merw/rng.hpp"

namespace merw {

namespace {

void matvec(const WeightedGraph& g, const std::vector<double>& v,
            std::vector<double>& out) {
  const Vertex n = g.vertex_count();
  for (Vertex x = 0; x < n; ++x) {
    double s = g.loop(x) * v[x];
    const auto nb = g.neighbors(x);
    const auto w = g.edge_weights(x);
    for (std::size_t i = 0; i < nb.size(); ++i) s += w[i] * v[nb[i]];
    out[x] = s;
  }
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double MarkovKernel::prob(const WeightedGraph& g, Vertex x, Vertex y) const {
  if (x == y) return loop_probs[x];
  const auto nb = g.neighbors(x);
  const auto it = std::lower_bound(nb.begin(), nb.end(), y);
  if (it == nb.end() || *it != y) return 0.0;
  return probs[off[x] + static_cast<std::size_t>(it - nb.begin())];
}

bool MarkovKernel::aligned(const WeightedGraph& g) const {
  if (vertex_count != g.vertex_count()) return false;
  for (Vertex x = 0; x < vertex_count; ++x) {
    const auto w = g.edge_weights(x);
    const auto p = row(x);
    if (w.size() != p.size()) return false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if ((p[i] > 0.0) != (w[i] > 0.0)) return false;
    }
    if ((loop_probs[x] > 0.0) != (g.loop(x) > 0.0)) return false;
  }
  return true;
}

bool MarkovKernel::supported_on(const WeightedGraph& g) const {
  if (vertex_count != g.vertex_count()) return false;
  for (Vertex x = 0; x < vertex_count; ++x) {
    const auto w = g.edge_weights(x);
    const auto p = row(x);
    if (w.size() != p.size()) return false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (p[i] > 0.0 && !(w[i] > 0.0)) return false;
    }
    if (loop_probs[x] > 0.0 && !(g.loop(x) > 0.0)) return false;
  }
  return true;
}

MarkovKernel MarkovKernel::zero_like(const WeightedGraph& g, WalkKind kind) {
  MarkovKernel k;
  k.kind = kind;
  k.vertex_count = g.vertex_count();
  k.off.assign(static_cast<std::size_t>(g.vertex_count()) + 1, 0);
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    k.off[x + 1] = k.off[x] + g.neighbors(x).size();
  }
  k.probs.assign(k.off.back(), 0.0);
  k.loop_probs.assign(g.vertex_count(), 0.0);
  return k;
}

MarkovKernel srw_kernel(const WeightedGraph& g) {
  MarkovKernel k = MarkovKernel::zero_like(g, WalkKind::srw);
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    const double deg = g.weighted_degree(x);
    if (deg <= 0.0) throw std::invalid_argument("srw_kernel: isolated vertex");
    const auto w = g.edge_weights(x);
    auto p = k.row(x);
    for (std::size_t i = 0; i < w.size(); ++i) p[i] = w[i] / deg;
    k.loop_probs[x] = g.loop(x) / deg;
  }
  return k;
}

PrincipalPair principal_pair(const WeightedGraph& g, PowerIterOptions opt) {
  if (!g.connected()) {
    throw std::invalid_argument("principal_pair: graph must be connected");
  }
  if (!(opt.tol > 0.0)) throw std::invalid_argument("principal_pair: tol must be > 0");
  const Vertex n = g.vertex_count();
  const double shift = g.degree_bound();

  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> av(n, 0.0);

  PrincipalPair out;
  for (long it = 1; it <= opt.max_iters; ++it) {
    matvec(g, v, av);
    const double rho = dot(v, av);
    double res2 = 0.0;
    for (Vertex x = 0; x < n; ++x) {
      const double r = av[x] - rho * v[x];
      res2 += r * r;
    }
    out.iterations = it;
    out.residual = std::sqrt(res2);
    out.rho = rho;
    if (out.residual <= opt.tol) {
      out.eigvec = v;
      break;
    }
    double nrm2 = 0.0;
    for (Vertex x = 0; x < n; ++x) {
      v[x] = av[x] + shift * v[x];
      nrm2 += v[x] * v[x];
    }
    const double nrm = std::sqrt(nrm2);
    if (nrm == 0.0) {  // edgeless graph: rho = 0, constant eigenvector
      out.rho = 0.0;
      out.residual = 0.0;
      out.eigvec.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
      break;
    }
    for (Vertex x = 0; x < n; ++x) v[x] /= nrm;
  }
  if (out.eigvec.empty()) {
    throw std::runtime_error("principal_pair: no convergence within iteration budget");
  }
  for (double f : out.eigvec) {
    if (!(f > 0.0)) {
      throw std::runtime_error("principal_pair: eigenvector not strictly positive");
    }
  }
  return out;
}

// TODO: switch to a short Lanczos recurrence when lambda2 is nearly
// degenerate with lambda3 (random regular bulk); deflated power iteration
// needs O(1/spacing) sweeps there.
SpectralReport second_eigenvalue(const WeightedGraph& g, PowerIterOptions opt) {
  PowerIterOptions inner = opt;
  inner.tol = std::min(opt.tol, 1e-12);
  PrincipalPair pp;
  try {
    pp = principal_pair(g, inner);
  } catch (const std::runtime_error&) {
    // fall back to the requested tolerance; deflation quality is checked below
    pp = principal_pair(g, opt);
  }
  const std::vector<double>& f = pp.eigvec;
  if (pp.residual > 1e3 * opt.tol) {
    throw std::runtime_error(
        "second_eigenvalue: principal pair insufficiently converged for deflation");
  }
  const Vertex n = g.vertex_count();
  if (n == 1) return {pp.rho, pp.rho, 0.0};
  const double shift = g.degree_bound();

  // deterministic start, made orthogonal to F
  std::vector<double> v(n);
  for (Vertex x = 0; x < n; ++x) {
    v[x] = static_cast<double>(splitmix64(static_cast<std::uint64_t>(x) + 17)) *
               0x1.0p-64 - 0.5;
  }
  auto deflate = [&](std::vector<double>& w) {
    const double c = dot(f, w);
    for (Vertex x = 0; x < n; ++x) w[x] -= c * f[x];
  };
  deflate(v);
  double nrm = norm2(v);
  for (Vertex x = 0; x < n; ++x) v[x] /= nrm;

  std::vector<double> av(n, 0.0);
  double lambda2 = 0.0;
  bool converged = false;
  for (long it = 1; it <= opt.max_iters; ++it) {
    matvec(g, v, av);
    deflate(av);
    lambda2 = dot(v, av);
    double res2 = 0.0;
    for (Vertex x = 0; x < n; ++x) {
      const double r = av[x] - lambda2 * v[x];
      res2 += r * r;
    }
    if (std::sqrt(res2) <= opt.tol) {
      converged = true;
      break;
    }
    double nrm2 = 0.0;
    for (Vertex x = 0; x < n; ++x) {
      v[x] = av[x] + shift * v[x];
      nrm2 += v[x] * v[x];
    }
    deflate(v);
    nrm = norm2(v);
    if (nrm == 0.0) {  // spectrum in F-perp is {-shift}: lambda2 = -shift
      return {pp.rho, -shift, pp.rho + shift};
    }
    for (Vertex x = 0; x < n; ++x) v[x] /= nrm;
  }
  if (!converged) {
    throw std::runtime_error("second_eigenvalue: no convergence within iteration budget");
  }
  return {pp.rho, lambda2, pp.rho - lambda2};
}

MerwReport merw(const WeightedGraph& g, PowerIterOptions opt) {
  MerwReport rep;
  rep.pair = principal_pair(g, opt);
  const SpectralReport sr = second_eigenvalue(g, opt);
  rep.rho = rep.pair.rho;
  rep.lambda2 = sr.lambda2;
  rep.gap = sr.gap;
  const Vertex n = g.vertex_count();
  const std::vector<double>& f = rep.pair.eigvec;
  const double rho = rep.rho;
  if (!(rho > 0.0)) throw std::runtime_error("merw: zero spectral radius");

  rep.kernel = MarkovKernel::zero_like(g, WalkKind::merw);
  for (Vertex x = 0; x < n; ++x) {
    const auto nb = g.neighbors(x);
    const auto w = g.edge_weights(x);
    auto p = rep.kernel.row(x);
    double sum = g.loop(x) / rho;
    rep.kernel.loop_probs[x] = sum;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      p[i] = w[i] * f[nb[i]] / (rho * f[x]);
      sum += p[i];
    }
    // exact row-stochasticity; the analytic sum is already 1 up to residual
    rep.kernel.loop_probs[x] /= sum;
    for (std::size_t i = 0; i < nb.size(); ++i) p[i] /= sum;
  }

  rep.pi.assign(n, 0.0);
  double z = 0.0;
  for (Vertex x = 0; x < n; ++x) {
    rep.pi[x] = f[x] * f[x];
    z += rep.pi[x];
  }
  for (Vertex x = 0; x < n; ++x) rep.pi[x] /= z;

  double ks = 0.0;
  for (Vertex x = 0; x < n; ++x) {
    const auto nb = g.neighbors(x);
    const auto w = g.edge_weights(x);
    const auto p = rep.kernel.row(x);
    double h = 0.0;
    if (rep.kernel.loop_probs[x] > 0.0) {
      h -= rep.kernel.loop_probs[x] * std::log(rep.kernel.loop_probs[x] / g.loop(x));
    }
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (p[i] > 0.0) h -= p[i] * std::log(p[i] / w[i]);
    }
    ks += rep.pi[x] * h;
  }
  rep.ks_entropy = ks;
  return rep;
}

std::string MerwReport::to_json(const WeightedGraph& g) const {
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "{\"rho\":" << num(rho) << ",\"lambda2\":" << num(lambda2)
     << ",\"gap\":" << num(gap) << ",\"ks_entropy\":" << num(ks_entropy)
     << ",\"kernel\":[";
  bool first = true;
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    if (kernel.loop_probs[x] > 0.0) {
      if (!first) os << ",";
      first = false;
      os << "[" << x << "," << x << "," << num(kernel.loop_probs[x]) << "]";
    }
    const auto nb = g.neighbors(x);
    const auto p = kernel.row(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (!first) os << ",";
      first = false;
      os << "[" << x << "," << nb[i] << "," << num(p[i]) << "]";
    }
  }
  os << "],\"pi\":[";
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    if (x) os << ",";
    os << num(pi[x]);
  }
  os << "]}";
  return os.str();
}

}  // namespace merw
