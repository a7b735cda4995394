#include "merw/walk_counts.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include "merw/rng.hpp"

namespace merw {

namespace {
constexpr double kBase = 0x1p+256;
constexpr double kInvBase = 0x1p-256;
const double kLogBase = 256.0 * std::numbers::ln2;
}  // namespace

// --- BallTruncation -------------------------------------------------------

void BallTruncation::require_window(int dist, int n) const {
  if (!window_ok(dist, n)) {
    throw std::invalid_argument(
        "exactness window violated: need dist + n <= radius, got dist=" +
        std::to_string(dist) + " n=" + std::to_string(n) +
        " radius=" + std::to_string(radius));
  }
}

BallTruncation BallTruncation::tree_ball(int d, int radius, double sigma) {
  if (d < 2) throw std::invalid_argument("tree ball: need d >= 2");
  if (radius < 0) throw std::invalid_argument("tree ball: need radius >= 0");
  if (sigma < 0) throw std::invalid_argument("tree ball: need sigma >= 0");
  return {BallModel::tree, d, radius, sigma};
}

BallTruncation BallTruncation::lattice_ball(int dim, int radius, double sigma) {
  if (dim < 1) throw std::invalid_argument("lattice ball: need dim >= 1");
  if (radius < 0) throw std::invalid_argument("lattice ball: need radius >= 0");
  if (sigma < 0) throw std::invalid_argument("lattice ball: need sigma >= 0");
  double cells = 1;
  for (int k = 0; k < dim; ++k) cells *= 2.0 * radius + 1.0;
  if (cells > 5e7) throw std::invalid_argument("lattice ball: box too large");
  return {BallModel::lattice, dim, radius, sigma};
}

BallTruncation BallTruncation::canopy_levels(int d, int top_level) {
  if (d < 3) throw std::invalid_argument("canopy: need d >= 3");
  if (top_level < 1) throw std::invalid_argument("canopy: need top level >= 1");
  return {BallModel::canopy, d, top_level, 0.0};
}

WeightedGraph BallTruncation::materialize() const {
  switch (model) {
    case BallModel::tree: {
      WeightedGraph g = gen::tree_ball(param, radius);
      if (center_loop > 0.0) return perturb_loops(g, {{0}, center_loop});
      return g;
    }
    case BallModel::canopy:
      return gen::canopy_trunc(param, radius);
    case BallModel::lattice: {
      WeightedGraph g = gen::lattice_box(param, 2 * radius + 1);
      if (center_loop > 0.0) {
        return perturb_loops(g, {{g.labels().center}, center_loop});
      }
      return g;
    }
  }
  throw std::invalid_argument("materialize: unknown ball model");
}

// --- WalkCountVector --------------------------------------------------------

WalkCountVector WalkCountVector::ones(std::size_t size) {
  WalkCountVector v;
  v.mant_.assign(size, 1.0);
  return v;
}

double WalkCountVector::log_value(std::size_t i) const {
  return std::log(mant_[i]) + static_cast<double>(exp2_) * kLogBase;
}

bool WalkCountVector::all_positive() const {
  for (double m : mant_) {
    if (!(m > 0.0)) return false;
  }
  return true;
}

double WalkCountVector::ratio(const WalkCountVector& num, std::size_t i,
                              const WalkCountVector& den, std::size_t j) {
  const long de = num.exp2_ - den.exp2_;
  return std::ldexp(num.mant_[i] / den.mant_[j],
                    static_cast<int>(de) * kBaseBits);
}

void WalkCountVector::renormalize() {
  double mx = 0.0;
  for (double m : mant_) mx = std::max(mx, m);
  if (mx == 0.0) return;
  while (mx >= kBase) {
    for (double& m : mant_) m *= kInvBase;
    mx *= kInvBase;
    ++exp2_;
  }
  while (mx < 1.0) {
    for (double& m : mant_) m *= kBase;
    mx *= kBase;
    --exp2_;
  }
}

WalkCountVector adjacency_sweep(const WeightedGraph& g, const WalkCountVector& v) {
  if (v.size() != static_cast<std::size_t>(g.vertex_count())) {
    throw std::invalid_argument("adjacency_sweep: size mismatch");
  }
  WalkCountVector out = v;
  const auto& src = v.raw();
  auto& dst = out.raw();
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    double s = g.loop(x) * src[x];
    const auto nb = g.neighbors(x);
    const auto w = g.edge_weights(x);
    for (std::size_t i = 0; i < nb.size(); ++i) s += w[i] * src[nb[i]];
    dst[x] = s;
  }
  out.set_meta(v.n() + 1, -1);
  out.renormalize();
  return out;
}

WalkCountVector walk_counts(const WeightedGraph& g, int n) {
  if (n < 0) throw std::invalid_argument("walk_counts: need n >= 0");
  WalkCountVector v = WalkCountVector::ones(g.vertex_count());
  for (int k = 0; k < n; ++k) v = adjacency_sweep(g, v);
  return v;
}

// --- BallCounts -------------------------------------------------------------

BallCounts::BallCounts(const BallTruncation& ball) : ball_(ball) {
  std::size_t size = 0;
  switch (ball_.model) {
    case BallModel::tree:
      size = static_cast<std::size_t>(ball_.radius) + 1;
      break;
    case BallModel::canopy:
      size = static_cast<std::size_t>(ball_.radius);
      if (ball_.center_loop != 0.0) {
        throw std::invalid_argument("canopy ball: loops unsupported");
      }
      break;
    case BallModel::lattice: {
      stride_.assign(ball_.param, 1);
      const long long side = 2LL * ball_.radius + 1;
      for (int k = 1; k < ball_.param; ++k) stride_[k] = stride_[k - 1] * side;
      size = static_cast<std::size_t>(stride_.back() * side);
      break;
    }
  }
  cur_ = WalkCountVector::ones(size);
  cur_.set_meta(0, ball_.radius);
  prev_ = prev2_ = WalkCountVector();
}

std::size_t BallCounts::index_of_shell(int shell) const {
  if (ball_.model == BallModel::lattice) {
    throw std::invalid_argument("index_of_shell: lattice balls use sites");
  }
  const int lo = ball_.min_shell();
  if (shell < lo || shell > ball_.radius) {
    throw std::invalid_argument("index_of_shell: out of range");
  }
  return static_cast<std::size_t>(shell - lo);
}

std::size_t BallCounts::index_of_site(std::span<const int> x) const {
  if (ball_.model != BallModel::lattice) {
    throw std::invalid_argument("index_of_site: shell models use shells");
  }
  if (static_cast<int>(x.size()) != ball_.param) {
    throw std::invalid_argument("index_of_site: dimension mismatch");
  }
  long long idx = 0;
  for (int k = 0; k < ball_.param; ++k) {
    if (std::abs(x[k]) > ball_.radius) {
      throw std::invalid_argument("index_of_site: outside the box");
    }
    idx += (static_cast<long long>(x[k]) + ball_.radius) * stride_[k];
  }
  return static_cast<std::size_t>(idx);
}

void BallCounts::sweep(const WalkCountVector& src_v, WalkCountVector& dst_v) const {
  const auto& src = src_v.raw();
  auto& dst = dst_v.raw();
  const int d = ball_.param;
  const int R = ball_.radius;
  switch (ball_.model) {
    case BallModel::tree: {
      // shell 0: d children; shell k: 1 parent, d-1 children; shell R: cut
      dst[0] = ball_.center_loop * src[0] + (R >= 1 ? d * src[1] : 0.0);
      for (int k = 1; k <= R; ++k) {
        double s = src[k - 1];
        if (k < R) s += (d - 1) * src[k + 1];
        dst[k] = s;
      }
      break;
    }
    case BallModel::canopy: {
      // index i holds level i+1; level 1 is the leaf level
      const int L = R;
      for (int i = 0; i < L; ++i) {
        const int level = i + 1;
        double s = 0.0;
        if (level >= 2) s += (d - 1) * src[i - 1];
        if (level < L) s += src[i + 1];
        dst[i] = s;
      }
      break;
    }
    case BallModel::lattice: {
      const long long side = 2LL * R + 1;
      const long long cells = static_cast<long long>(src.size());
      for (long long i = 0; i < cells; ++i) {
        double s = 0.0;
        long long rem = i;
        for (int k = ball_.param - 1; k >= 0; --k) {
          const long long c = rem / stride_[k];
          rem -= c * stride_[k];
          if (c > 0) s += src[i - stride_[k]];
          if (c < side - 1) s += src[i + stride_[k]];
        }
        dst[i] = s;
      }
      if (ball_.center_loop > 0.0) {
        const std::size_t o = index_of_site(std::vector<int>(ball_.param, 0));
        dst[o] += ball_.center_loop * src[o];
      }
      break;
    }
  }
}

void BallCounts::advance() {
  WalkCountVector next = cur_;
  sweep(cur_, next);
  next.set_meta(cur_.n() + 1, ball_.radius - (cur_.n() + 1));
  next.renormalize();
  prev2_ = std::move(prev_);
  prev_ = std::move(cur_);
  cur_ = std::move(next);
}

void BallCounts::advance_to(int n) {
  if (n < cur_.n()) throw std::invalid_argument("advance_to: cannot rewind");
  while (cur_.n() < n) advance();
}

const WalkCountVector& BallCounts::counts(int back) const {
  switch (back) {
    case 0: return cur_;
    case 1:
      if (prev_.size() == 0) throw std::logic_error("counts: n-1 not available");
      return prev_;
    case 2:
      if (prev2_.size() == 0) throw std::logic_error("counts: n-2 not available");
      return prev2_;
    default: throw std::invalid_argument("counts: back must be 0, 1 or 2");
  }
}

// --- urw_estimate -----------------------------------------------------------

namespace {

UrwRatio make_ratio(const BallCounts& bc, std::size_t from, std::size_t to,
                    double weight, int to_label, int multiplicity) {
  UrwRatio r;
  r.to = to_label;
  r.weight = weight;
  r.multiplicity = multiplicity;
  r.ratio_n = weight * WalkCountVector::ratio(bc.counts(1), to, bc.counts(0), from);
  r.ratio_prev = weight * WalkCountVector::ratio(bc.counts(2), to, bc.counts(1), from);
  r.parity_avg = 0.5 * (r.ratio_n + r.ratio_prev);
  r.cauchy_delta = r.ratio_n - r.ratio_prev;
  return r;
}

}  // namespace

UrwEstimate urw_estimate(const BallTruncation& ball, int shell, int n) {
  if (ball.model == BallModel::lattice) {
    throw std::invalid_argument("urw_estimate: lattice balls take a site");
  }
  if (n < 2) throw std::invalid_argument("urw_estimate: need n >= 2");
  ball.require_window(shell, n);
  BallCounts bc(ball);
  bc.advance_to(n);

  UrwEstimate est;
  est.n = n;
  est.at = shell;
  const std::size_t from = bc.index_of_shell(shell);
  const int d = ball.param;

  if (ball.model == BallModel::tree) {
    if (shell == 0) {
      if (ball.center_loop > 0.0) {
        est.row.push_back(make_ratio(bc, from, from, ball.center_loop, 0, 1));
      }
      if (ball.radius >= 1) {
        est.row.push_back(make_ratio(bc, from, bc.index_of_shell(1), 1.0, 1, d));
      }
    } else {
      est.row.push_back(make_ratio(bc, from, bc.index_of_shell(shell - 1), 1.0, shell - 1, 1));
      est.row.push_back(make_ratio(bc, from, bc.index_of_shell(shell + 1), 1.0, shell + 1, d - 1));
    }
  } else {  // canopy: levels
    est.row.push_back(make_ratio(bc, from, bc.index_of_shell(shell + 1), 1.0, shell + 1, 1));
    if (shell >= 2) {
      est.row.push_back(make_ratio(bc, from, bc.index_of_shell(shell - 1), 1.0, shell - 1, d - 1));
    }
  }
  for (const UrwRatio& r : est.row) est.row_sum += r.multiplicity * r.ratio_n;
  return est;
}

UrwEstimate urw_estimate(const BallTruncation& ball, std::span<const int> site, int n) {
  if (ball.model != BallModel::lattice) {
    throw std::invalid_argument("urw_estimate: shell models take a shell index");
  }
  if (n < 2) throw std::invalid_argument("urw_estimate: need n >= 2");
  int dist = 0;
  for (int c : site) dist += std::abs(c);
  ball.require_window(dist, n);
  BallCounts bc(ball);
  bc.advance_to(n);

  UrwEstimate est;
  est.n = n;
  est.at = dist;
  const std::size_t from = bc.index_of_site(site);
  std::vector<int> y(site.begin(), site.end());
  const bool at_origin = (dist == 0);
  if (at_origin && ball.center_loop > 0.0) {
    est.row.push_back(make_ratio(bc, from, from, ball.center_loop, 0, 1));
  }
  for (int k = 0; k < ball.param; ++k) {
    for (int s : {+1, -1}) {
      y[k] = site[k] + s;
      est.row.push_back(make_ratio(bc, from, bc.index_of_site(y), 1.0,
                                   s > 0 ? (k + 1) : -(k + 1), 1));
      y[k] = site[k];
    }
  }
  for (const UrwRatio& r : est.row) est.row_sum += r.multiplicity * r.ratio_n;
  return est;
}

// --- doob_check ---------------------------------------------------------------

namespace {

struct BridgeSpread {
  double lo = 0.0, hi = 0.0;
  bool seen = false;
  long pairs = 0;
  void add(double v) {
    if (!seen) {
      lo = hi = v;
      seen = true;
    } else {
      ++pairs;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
};

// exhaustive log(p/a) spread over all walks of length len from start
void enumerate_bridges(const WeightedGraph& g, const MarkovKernel& p, Vertex start,
                       int len, std::map<Vertex, BridgeSpread>& buckets) {
  struct Frame {
    Vertex at;
    double logratio;
    int depth;
  };
  std::vector<Frame> stack{{start, 0.0, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.depth == len) {
      buckets[f.at].add(f.logratio);
      continue;
    }
    const auto nb = g.neighbors(f.at);
    const auto w = g.edge_weights(f.at);
    const auto pr = p.row(f.at);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      stack.push_back({nb[i], f.logratio + std::log(pr[i] / w[i]), f.depth + 1});
    }
    if (g.loop(f.at) > 0.0) {
      stack.push_back({f.at, f.logratio + std::log(p.loop(f.at) / g.loop(f.at)),
                       f.depth + 1});
    }
  }
}

}  // namespace

DoobReport doob_check(const WeightedGraph& g, const MarkovKernel& p,
                      int max_len, long samples, std::uint64_t seed, double tol) {
  p.require_aligned(g);
  if (max_len < 2) throw std::invalid_argument("doob_check: need max_len >= 2");

  DoobReport rep;

  // per-edge energies straight from the kernel
  std::vector<double> energies;
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    const auto nb = g.neighbors(x);
    const auto w = g.edge_weights(x);
    const auto pr = p.row(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (nb[i] > x) {
        const double pyx = p.prob(g, nb[i], x);
        energies.push_back(w[i] / std::sqrt(pr[i] * pyx));
      }
    }
    if (g.loop(x) > 0.0) energies.push_back(g.loop(x) / p.loop(x));
  }
  if (energies.empty()) throw std::invalid_argument("doob_check: graph has no edges");
  std::sort(energies.begin(), energies.end());
  rep.energy = energies[energies.size() / 2];
  rep.energy_spread = (energies.back() - energies.front()) / rep.energy;

  // bridge discrepancies
  Rng rng(seed);
  double worst = 0.0;
  long pairs = 0;
  const Vertex n = g.vertex_count();
  for (int len = 2; len <= max_len; ++len) {
    // estimated walk count per start; exhaust when cheap
    double per_start = 1.0;
    for (int i = 0; i < len; ++i) per_start *= g.degree_bound();
    const bool exhaustive = (len <= 6) && (per_start * n <= 2e6);
    std::map<Vertex, BridgeSpread> buckets;
    if (exhaustive) {
      for (Vertex x = 0; x < n; ++x) {
        buckets.clear();
        enumerate_bridges(g, p, x, len, buckets);
        for (const auto& [end, b] : buckets) {
          if (b.pairs > 0) {
            worst = std::max(worst, b.hi - b.lo);
            pairs += b.pairs;
          }
        }
      }
    } else {
      std::map<std::pair<Vertex, Vertex>, BridgeSpread> sampled;
      for (long s = 0; s < samples; ++s) {
        Vertex x = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
        const Vertex start = x;
        double logratio = 0.0;
        for (int step = 0; step < len; ++step) {
          // draw the next step from the kernel row (loop slot last)
          double u = rng.uniform();
          const auto nb = g.neighbors(x);
          const auto w = g.edge_weights(x);
          const auto pr = p.row(x);
          bool moved = false;
          for (std::size_t i = 0; i < nb.size(); ++i) {
            if (u < pr[i]) {
              logratio += std::log(pr[i] / w[i]);
              x = nb[i];
              moved = true;
              break;
            }
            u -= pr[i];
          }
          if (!moved) {
            if (p.loop(x) > 0.0) {
              logratio += std::log(p.loop(x) / g.loop(x));
            } else {
              // numerical row-sum slack; retake the last neighbor
              const std::size_t i = nb.size() - 1;
              logratio += std::log(pr[i] / w[i]);
              x = nb[i];
            }
          }
        }
        sampled[{start, x}].add(logratio);
      }
      for (const auto& [key, b] : sampled) {
        if (b.pairs > 0) {
          worst = std::max(worst, b.hi - b.lo);
          pairs += b.pairs;
        }
      }
    }
  }
  rep.max_bridge_discrepancy = worst;
  rep.pairs_tested = pairs;
  rep.is_doob = (rep.energy_spread <= tol) && (worst <= tol);
  return rep;
}

}  // namespace merw
