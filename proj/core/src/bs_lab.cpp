#include "merw/bs_lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "merw/parallel.hpp"
#include "merw/rank_one.hpp"
#include "merw/rng.hpp"
#include "merw/spectral.hpp"

namespace merw {

namespace {

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t idx = std::min(
      v.size() - 1, static_cast<std::size_t>(std::ceil(q * v.size())) -
                        (q > 0.0 ? 1 : 0));
  return v[idx];
}

}  // namespace

LocalStats local_stats(const WeightedGraph& g, const MarkovKernel& p,
                       std::span<const Vertex> roots) {
  p.require_supported_on(g);
  LocalStats out;
  out.roots.assign(roots.begin(), roots.end());
  const MarkovKernel srw = srw_kernel(g);

  auto row_tv = [&](Vertex x) {
    double tv = std::abs(p.loop(x) - srw.loop(x));
    const auto pr = p.row(x);
    const auto sr = srw.row(x);
    for (std::size_t i = 0; i < pr.size(); ++i) tv += std::abs(pr[i] - sr[i]);
    return 0.5 * tv;
  };
  // depth-2: walk distributions over ordered pairs of steps
  auto row_tv2 = [&](Vertex x) {
    double tv = 0.0;
    auto visit = [&](Vertex mid, double p1, double s1) {
      tv += std::abs(p.loop(mid) * p1 - srw.loop(mid) * s1);
      const auto pr = p.row(mid);
      const auto sr = srw.row(mid);
      for (std::size_t j = 0; j < pr.size(); ++j) {
        tv += std::abs(p1 * pr[j] - s1 * sr[j]);
      }
    };
    if (p.loop(x) > 0.0 || srw.loop(x) > 0.0) visit(x, p.loop(x), srw.loop(x));
    const auto nb = g.neighbors(x);
    const auto pr = p.row(x);
    const auto sr = srw.row(x);
    for (std::size_t i = 0; i < nb.size(); ++i) visit(nb[i], pr[i], sr[i]);
    return 0.5 * tv;
  };

  std::vector<char> in_roots(g.vertex_count(), 0);
  for (Vertex r : roots) in_roots[r] = 1;

  out.tv_to_srw.reserve(roots.size());
  out.tv2_to_srw.reserve(roots.size());
  for (Vertex x : roots) {
    out.tv_to_srw.push_back(row_tv(x));
    out.tv2_to_srw.push_back(row_tv2(x));
    const auto nb = g.neighbors(x);
    const auto w = g.edge_weights(x);
    const auto pr = p.row(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const Vertex y = nb[i];
      if (y > x && in_roots[y]) {
        const double pyx = p.prob(g, y, x);
        out.edges.emplace_back(x, y);
        out.edge_energy_stat.push_back(pr[i] * pyx / (w[i] * w[i]));
      }
    }
  }
  return out;
}

std::vector<SequenceRecord> sequence_experiment(const SequenceConfig& cfg) {
  if (cfg.d < 3) throw std::invalid_argument("sequence_experiment: need d >= 3");
  if (cfg.sizes.empty() || cfg.seeds.empty()) {
    throw std::invalid_argument("sequence_experiment: sizes and seeds required");
  }
  for (std::size_t i = 1; i < cfg.sizes.size(); ++i) {
    if (cfg.sizes[i] <= cfg.sizes[i - 1]) {
      throw std::invalid_argument("sequence_experiment: sizes must increase");
    }
  }
  if (cfg.sigma < 0.0) throw std::invalid_argument("sequence_experiment: sigma >= 0");

  const RankOneModel tree_model = RankOneModel::tree(cfg.d);
  const double predicted =
      cfg.omega == OmegaRule::single_site ? tree_model.rho_sigma(cfg.sigma) : 0.0;
  const std::size_t jobs = cfg.sizes.size() * cfg.seeds.size();
  std::vector<SequenceRecord> records(jobs);

  parallel_for(jobs, cfg.threads, [&](std::size_t job) {
    const int n = cfg.sizes[job / cfg.seeds.size()];
    const std::uint64_t seed = cfg.seeds[job % cfg.seeds.size()];
    SequenceRecord rec;
    rec.n = n;
    rec.seed = seed;

    const WeightedGraph base = gen::random_regular(n, cfg.d, seed);
    std::vector<Vertex> omega;
    if (cfg.omega == OmegaRule::single_site) {
      omega.push_back(0);
    } else {
      Rng rng = Rng::stream(seed, 0x1001);
      for (Vertex x = 0; x < n; ++x) {
        if (rng.uniform() < cfg.iid_p) omega.push_back(x);
      }
    }
    const WeightedGraph g =
        cfg.sigma > 0.0 && !omega.empty()
            ? perturb_loops(base, {omega, cfg.sigma})
            : base;

    PowerIterOptions opt;
    opt.tol = cfg.tol;
    const MerwReport rep = merw(g, opt);
    rec.rho_n = rep.rho;
    rec.lambda2_n = second_eigenvalue(base, opt).lambda2;
    rec.margin = cfg.d - rec.lambda2_n - cfg.sigma;
    rec.rho_lower_bound =
        cfg.d + cfg.sigma * static_cast<double>(omega.size()) / n;
    rec.predicted_rho = predicted;

    rec.far_cutoff = static_cast<int>(
        std::floor(std::log(static_cast<double>(n)) / std::log(cfg.d - 1.0) / 2.0));
    const std::vector<int> dist = g.distances_from(omega);
    std::vector<Vertex> far;
    for (Vertex x = 0; x < n; ++x) {
      if (dist[x] > rec.far_cutoff) far.push_back(x);
    }
    rec.far_roots = static_cast<int>(far.size());
    if (!far.empty()) {
      const LocalStats stats = local_stats(g, rep.kernel, far);
      double tv_sum = 0.0, tv2_sum = 0.0;
      for (double v : stats.tv_to_srw) tv_sum += v;
      for (double v : stats.tv2_to_srw) tv2_sum += v;
      rec.tv_mean = tv_sum / far.size();
      rec.tv2_mean = tv2_sum / far.size();
      rec.tv_p95 = quantile(stats.tv_to_srw, 0.95);
      if (!stats.edge_energy_stat.empty()) {
        rec.energy_median = quantile(stats.edge_energy_stat, 0.5);
        rec.energy_iqr = quantile(stats.edge_energy_stat, 0.75) -
                         quantile(stats.edge_energy_stat, 0.25);
      }

      // TV against the rank-one closed-form rows at the root's distance;
      // neighbors are attributed by their own distance label, same-shell
      // neighbors (odd cycles) fall back to the SRW value
      if (cfg.omega == OmegaRule::single_site) {
        double acc = 0.0;
        for (Vertex x : far) {
          const int k = dist[x];
          const auto row = tree_model.kernel_row(cfg.sigma, k);
          double up = 1.0 / cfg.d, down = 1.0 / cfg.d;
          for (const auto& e : row) {
            if (e.to == k - 1) down = e.prob;
            if (e.to == k + 1) up = e.prob;
          }
          double tv = 0.0;
          const auto nb = g.neighbors(x);
          const auto pr = rep.kernel.row(x);
          for (std::size_t i = 0; i < nb.size(); ++i) {
            const int kd = dist[nb[i]];
            const double pred = kd < k ? down : kd > k ? up : 1.0 / cfg.d;
            tv += std::abs(pr[i] - pred);
          }
          acc += 0.5 * tv;
        }
        rec.tv_pred_mean = acc / far.size();
      }
    }
    records[job] = rec;
  });
  return records;
}

}  // namespace merw
