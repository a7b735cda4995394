#include "merw/rank_one.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "merw/parallel.hpp"

namespace merw {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::transient: return "transient";
    case Phase::null_recurrent: return "null_recurrent";
    case Phase::positive_recurrent: return "positive_recurrent";
  }
  return "?";
}

RankOneModel RankOneModel::tree(int d) {
  if (d < 3) throw std::invalid_argument("RankOneModel::tree: need d >= 3");
  RankOneModel m;
  m.kind_ = Kind::tree;
  m.green_ = GreenFunction::tree(d);
  m.degree_ = d;
  m.r_base_ = 2.0 * std::sqrt(static_cast<double>(d - 1));
  return m;
}

RankOneModel RankOneModel::lattice(int dim, int series_terms) {
  RankOneModel m;
  m.kind_ = Kind::lattice;
  m.green_ = GreenFunction::lattice(dim, series_terms);
  m.degree_ = 2.0 * dim;
  m.r_base_ = 2.0 * dim;  // amenable: the l2 norm equals the degree
  m.dim_ = dim;
  return m;
}

RankOneModel RankOneModel::finite(WeightedGraph g, Vertex origin) {
  if (g.has_loops()) {
    throw std::invalid_argument("RankOneModel::finite: base graph must be loop-free");
  }
  const double d0 = g.weighted_degree(0);
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    if (std::abs(g.weighted_degree(x) - d0) > 1e-12 * std::max(1.0, d0)) {
      throw std::invalid_argument("RankOneModel::finite: base graph must be regular");
    }
  }
  RankOneModel m;
  m.kind_ = Kind::finite;
  m.green_ = GreenFunction::finite(std::move(g), origin);
  m.degree_ = d0;
  m.r_base_ = m.green_.as_finite().rho();  // equals d0 for connected regular G
  return m;
}

Thresholds RankOneModel::thresholds() const {
  Thresholds th;
  switch (kind_) {
    case Kind::tree: {
      // closed forms: f_oo(1/d) = (d-1)/(d-2) and f_oo at the branch point
      // give d(d-2)/(d-1) and (d-2)/sqrt(d-1)
      const double d = degree_;
      th.sigma_star = d * (d - 2.0) / (d - 1.0);
      th.sigma_l2 = (d - 2.0) / std::sqrt(d - 1.0);
      break;
    }
    case Kind::lattice: {
      if (green_.as_lattice().diagonal_divergent_at_srw_point()) {
        // recurrent base walk: f_oo(1/d) diverges, any loop localizes
        th.sigma_star = 0.0;
        th.sigma_l2 = 0.0;
      } else {
        const double foo = green_.as_lattice().f_origin(1.0 / degree_).value;
        th.sigma_star = degree_ / foo;
        th.sigma_l2 = th.sigma_star;  // r(A) = d on the lattice
      }
      break;
    }
    case Kind::finite:
      // f_oo has its pole exactly at 1/rho(G) = 1/d: both thresholds vanish
      th.sigma_star = 0.0;
      th.sigma_l2 = 0.0;
      break;
  }
  return th;
}

bool RankOneModel::is_critical(double sigma) const {
  return std::abs(sigma - thresholds().sigma_star) <= 1e-9 * degree_;
}

// root of sigma * t * f_oo(t) = 1 on (0, t_hi]; increasing in t
double RankOneModel::solve_growth_root(double sigma, double t_hi, double tol) const {
  auto fval = [&](double t) { return sigma * t * diagonal_green(t) - 1.0; };
  double hi = t_hi;
  double fhi = fval(hi);
  if (fhi < 0.0) {
    throw std::runtime_error("rank-one growth root: bracket failure at t_hi");
  }
  double lo = 0.0;  // f(0) = -1
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fval(mid);
    if (fm >= 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
    }
    if (hi - lo <= 1e-18 + 1e-16 * hi && std::abs(fhi) <= tol) break;
  }
  if (std::abs(fhi) > tol) {
    throw std::runtime_error("rank-one growth root: residual above tolerance");
  }
  return hi;
}

double RankOneModel::rho_sigma(double sigma, double tol) const {
  if (sigma < 0.0) throw std::invalid_argument("rho_sigma: need sigma >= 0");
  const Thresholds th = thresholds();
  if (sigma <= th.sigma_star + 1e-9 * degree_) return degree_;
  double t_hi = 1.0 / degree_;
  // finite graphs have the pole of f exactly at 1/d; recurrent lattices
  // (dims 1, 2) diverge there as well
  if (kind_ == Kind::finite || (kind_ == Kind::lattice && dim_ <= 2)) {
    t_hi *= 1.0 - 1e-12;
  }
  return 1.0 / solve_growth_root(sigma, t_hi, tol);
}

double RankOneModel::r_sigma(double sigma, double tol) const {
  if (sigma < 0.0) throw std::invalid_argument("r_sigma: need sigma >= 0");
  const Thresholds th = thresholds();
  if (sigma <= th.sigma_l2 + 1e-12 * std::max(1.0, degree_)) return r_base_;
  double t_hi = 1.0 / r_base_;
  if (kind_ == Kind::finite || (kind_ == Kind::lattice && dim_ <= 2)) {
    t_hi *= 1.0 - 1e-12;
  }
  return 1.0 / solve_growth_root(sigma, t_hi, tol);
}

PhaseReport RankOneModel::classify_phase(double sigma, int profile_shells) const {
  if (sigma < 0.0) throw std::invalid_argument("classify_phase: need sigma >= 0");
  PhaseReport rep;
  const Thresholds th = thresholds();
  rep.sigma_star = th.sigma_star;
  rep.sigma_l2 = th.sigma_l2;
  rep.sigma = sigma;
  rep.widened_tolerance = (kind_ == Kind::lattice);
  rep.r_sigma = r_sigma(sigma);
  rep.rho_sigma = std::max(degree_, rep.r_sigma);

  const bool critical = is_critical(sigma);
  if (!critical && sigma < th.sigma_star) {
    rep.phase = Phase::transient;
    return rep;
  }
  if (critical) {
    // criticality resolved by square-summability of f_o.(1/d). Trees decay
    // geometrically; lattices have the |x|^(2-dim) tail, square-summable over
    // Z^dim exactly when dim >= 5; dims 1, 2 inherit the divergent diagonal.
    switch (kind_) {
      case Kind::tree:
        rep.phase = Phase::positive_recurrent;
        break;
      case Kind::lattice:
        rep.phase = (dim_ >= 5) ? Phase::positive_recurrent : Phase::null_recurrent;
        break;
      case Kind::finite:
        rep.phase = Phase::positive_recurrent;  // constant eigenfunction
        break;
    }
    rep.rho_sigma = degree_;
    if (rep.phase != Phase::positive_recurrent) return rep;
  } else {
    rep.phase = Phase::positive_recurrent;
  }

  // localized stationary profile on shell models
  if (kind_ == Kind::tree && profile_shells > 0) {
    const TreeGreen& tg = green_.as_tree();
    const double t = 1.0 / rep.rho_sigma;
    const double step = t * tg.h(t);  // f_ox ~ f_oo * step^dist
    rep.stationary_profile.resize(profile_shells);
    double v = 1.0;
    for (int k = 0; k < profile_shells; ++k) {
      rep.stationary_profile[k] = v;
      v *= step * step;
    }
  }
  return rep;
}

std::vector<RankOneRowEntry> RankOneModel::kernel_row(double sigma, int at,
                                                      double tol) const {
  if (sigma < 0.0) throw std::invalid_argument("kernel_row: need sigma >= 0");
  const Thresholds th = thresholds();
  std::vector<RankOneRowEntry> row;

  if (kind_ == Kind::tree) {
    if (at < 0) throw std::invalid_argument("kernel_row: shell must be >= 0");
    const TreeGreen& tg = green_.as_tree();
    const int d = static_cast<int>(degree_);
    if (!is_critical(sigma) && sigma < th.sigma_star) {
      // transient branch at t = 1/d
      const double t = 1.0 / degree_;
      const double s = sigma / degree_;
      const double foo = tg.f(t, 0);
      auto denom = [&](int k) { return 1.0 - s * foo + s * tg.f(t, k); };
      const double dk = denom(at);
      if (at == 0) {
        if (sigma > 0.0) row.push_back({0, sigma / degree_, 1, true});
        row.push_back({1, (1.0 / degree_) * denom(1) / dk, d, false});
      } else {
        row.push_back({at - 1, (1.0 / degree_) * denom(at - 1) / dk, 1, false});
        row.push_back({at + 1, (1.0 / degree_) * denom(at + 1) / dk, d - 1, false});
      }
    } else {
      // localized / critical branch at t = 1/rho_sigma: f ratios telescope
      const double rho = rho_sigma(sigma, tol);
      const double t = 1.0 / rho;
      const double step = t * tg.h(t);
      if (at == 0) {
        if (sigma > 0.0) row.push_back({0, sigma / rho, 1, true});
        row.push_back({1, step / rho, d, false});
      } else {
        row.push_back({at - 1, 1.0 / (rho * step), 1, false});
        row.push_back({at + 1, step / rho, d - 1, false});
      }
    }
    return row;
  }

  if (kind_ == Kind::finite) {
    const FiniteGreen& fg = green_.as_finite();
    const WeightedGraph& g = fg.graph();
    if (at < 0 || at >= g.vertex_count()) {
      throw std::invalid_argument("kernel_row: vertex out of range");
    }
    const Vertex o = fg.origin();
    if (sigma == 0.0) {
      for (std::size_t i = 0; i < g.neighbors(at).size(); ++i) {
        row.push_back({g.neighbors(at)[i], g.edge_weights(at)[i] / degree_, 1, false});
      }
      return row;
    }
    const double rho = rho_sigma(sigma, tol);
    const double t = 1.0 / rho;
    const double fx = fg.f(t, o, at);
    if (at == o) row.push_back({at, sigma / rho * 1.0, 1, true});
    const auto nb = g.neighbors(at);
    const auto w = g.edge_weights(at);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      row.push_back({nb[i], w[i] / rho * fg.f(t, o, nb[i]) / fx, 1, false});
    }
    return row;
  }

  throw std::invalid_argument("kernel_row: lattice models take a site");
}

std::vector<RankOneRowEntry> RankOneModel::kernel_row_lattice(
    double sigma, std::span<const int> site, double tol) const {
  if (kind_ != Kind::lattice) {
    throw std::invalid_argument("kernel_row_lattice: not a lattice model");
  }
  const LatticeGreen& lg = green_.as_lattice();
  const Thresholds th = thresholds();
  std::vector<RankOneRowEntry> row;
  int dist = 0;
  for (int c : site) dist += std::abs(c);

  const bool transient = !is_critical(sigma) && sigma < th.sigma_star;
  const double rho = transient ? degree_ : rho_sigma(sigma, tol);
  const double t = 1.0 / rho;
  std::vector<int> y(site.begin(), site.end());

  auto weight_of = [&](std::span<const int> pt) {
    if (transient) {
      const double s = sigma / degree_;
      return 1.0 - s * lg.f_origin(t).value + s * lg.f_point(t, pt).value;
    }
    return lg.f_point(t, pt).value;
  };
  const double wx = weight_of(site);
  if (dist == 0 && sigma > 0.0) row.push_back({0, sigma / rho, 1, true});
  for (int k = 0; k < dim_; ++k) {
    for (int s : {+1, -1}) {
      y[k] = site[k] + s;
      row.push_back({s > 0 ? (k + 1) : -(k + 1), weight_of(y) / (rho * wx), 1, false});
      y[k] = site[k];
    }
  }
  return row;
}

std::vector<SweepRow> phase_sweep(const RankOneModel& model,
                                  std::span<const double> sigma_grid, double tol,
                                  int threads) {
  std::vector<SweepRow> rows(sigma_grid.size());
  const Thresholds th = model.thresholds();
  parallel_for(sigma_grid.size(), threads, [&](std::size_t i) {
    SweepRow r{};
    r.sigma = sigma_grid[i];
    r.sigma_star = th.sigma_star;
    r.sigma_l2 = th.sigma_l2;
    r.rho_sigma = model.rho_sigma(r.sigma, tol);
    r.r_sigma = model.r_sigma(r.sigma, tol);
    r.phase = model.classify_phase(r.sigma, 0).phase;
    rows[i] = r;
  });
  return rows;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  const auto c1 = spec.find(':');
  if (c1 == std::string::npos) {
    grid.push_back(std::stod(spec));
    return grid;
  }
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos) {
    throw std::invalid_argument("grid: expected start:stop:step");
  }
  const double start = std::stod(spec.substr(0, c1));
  const double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
  const double step = std::stod(spec.substr(c2 + 1));
  if (!(step > 0.0) || stop < start) {
    throw std::invalid_argument("grid: need stop >= start and step > 0");
  }
  for (long k = 0;; ++k) {
    const double v = start + k * step;
    if (v > stop + 0.5 * step) break;
    grid.push_back(std::min(v, stop));
  }
  if (grid.empty()) throw std::invalid_argument("grid: empty");
  return grid;
}

}  // namespace merw
