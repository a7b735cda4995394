// merwlab: maximal-entropy and uniform random walk experiments on finite
// graphs and exact truncations of infinite ones.
//
// Exit codes: 0 success, 2 validation/usage error, 1 numeric failure.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "merw/bs_lab.hpp"
#include "merw/canopy.hpp"
#include "merw/entropy.hpp"
#include "merw/graph.hpp"
#include "merw/parallel.hpp"
#include "merw/rank_one.hpp"
#include "merw/rng.hpp"
#include "merw/spectral.hpp"
#include "merw/walk_counts.hpp"

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Output {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;

  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file = std::make_unique<std::ofstream>(path);
      if (!*file) throw std::invalid_argument("cannot open output path: " + path);
      os = file.get();
    }
  }
  std::ostream& stream() { return *os; }
};

void write_header(std::ostream& os, const std::string& command,
                  const std::string& config_echo) {
  os << "# merwlab " << command << "\n";
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  os << "# timestamp " << stamp << "\n";
  os << "# config " << config_echo << "\n";
}

// --- shared graph selection -------------------------------------------------

struct GraphArgs {
  std::string in_path;
  std::string model;
  int n = 0;
  int d = 3;
  int dim = 1;
  int extent = 0;  // radius / side / levels
  std::uint64_t seed = 1;
  double sigma = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--in", in_path, "read an edge-list graph file");
    cmd->add_option("--model", model,
                    "graph family: cycle|path|complete|random-regular|tree-ball|"
                    "lattice-box|canopy");
    cmd->add_option("--n", n, "vertex count for cycle/path/complete/random-regular");
    cmd->add_option("--d", d, "degree / tree branching");
    cmd->add_option("--dim", dim, "lattice dimension");
    cmd->add_option("--extent", extent, "radius / box side / canopy levels");
    cmd->add_option("--seed", seed, "generator seed");
    cmd->add_option("--sigma", sigma, "loop weight added at the distinguished vertex");
  }

  merw::WeightedGraph build() const {
    if (!in_path.empty()) {
      merw::WeightedGraph g = merw::read_edge_list_file(in_path);
      if (sigma > 0.0) return merw::perturb_loops(g, {{0}, sigma});
      return g;
    }
    merw::FamilySpec spec;
    using K = merw::FamilySpec::Kind;
    if (model == "cycle") spec.kind = K::cycle;
    else if (model == "path") spec.kind = K::path;
    else if (model == "complete") spec.kind = K::complete;
    else if (model == "random-regular") spec.kind = K::random_regular;
    else if (model == "tree-ball") spec.kind = K::tree_ball;
    else if (model == "lattice-box") spec.kind = K::lattice_box;
    else if (model == "canopy") spec.kind = K::canopy_trunc;
    else throw std::invalid_argument("unknown --model (and no --in given): " + model);
    spec.n = n;
    spec.d = d;
    spec.dim = dim;
    spec.extent = extent;
    spec.seed = seed;
    merw::WeightedGraph g = merw::generate(spec);
    if (sigma > 0.0) {
      const merw::Vertex at = g.labels().center >= 0 ? g.labels().center : 0;
      return merw::perturb_loops(g, {{at}, sigma});
    }
    return g;
  }

  std::string echo() const {
    std::ostringstream os;
    if (!in_path.empty()) os << "in=" << in_path;
    else os << "model=" << model << " n=" << n << " d=" << d << " dim=" << dim
            << " extent=" << extent << " seed=" << seed;
    os << " sigma=" << fmt17(sigma);
    return os.str();
  }
};

merw::RankOneModel make_rank_one(const std::string& model, int d, int dim) {
  if (model == "tree") return merw::RankOneModel::tree(d);
  if (model == "lattice") return merw::RankOneModel::lattice(dim);
  throw std::invalid_argument("rank-one --model must be tree or lattice");
}

// --- subcommand runners -------------------------------------------------------

int run_merw(const GraphArgs& graph_args, const std::string& out,
             const std::string& format, double tol, long max_iters) {
  const merw::WeightedGraph g = graph_args.build();
  merw::PowerIterOptions opt;
  opt.tol = tol;
  if (max_iters > 0) opt.max_iters = max_iters;
  const merw::MerwReport rep = merw::merw(g, opt);
  Output output(out);
  if (format == "json") {
    output.stream() << rep.to_json(g) << "\n";
    return 0;
  }
  write_header(output.stream(), "merw", graph_args.echo() + " tol=" + fmt17(tol));
  output.stream() << "quantity,value\n";
  output.stream() << "rho," << fmt17(rep.rho) << "\n";
  output.stream() << "lambda2," << fmt17(rep.lambda2) << "\n";
  output.stream() << "gap," << fmt17(rep.gap) << "\n";
  output.stream() << "ks_entropy," << fmt17(rep.ks_entropy) << "\n";
  output.stream() << "x,y,p_xy\n";
  for (merw::Vertex x = 0; x < g.vertex_count(); ++x) {
    if (rep.kernel.loop(x) > 0.0) {
      output.stream() << x << "," << x << "," << fmt17(rep.kernel.loop(x)) << "\n";
    }
    const auto nb = g.neighbors(x);
    const auto p = rep.kernel.row(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      output.stream() << x << "," << nb[i] << "," << fmt17(p[i]) << "\n";
    }
  }
  return 0;
}

int run_urw_ball(const std::string& model, int d, int dim, double sigma,
                 int shell, const std::vector<int>& site, int n_max, int stride,
                 const std::string& out) {
  using merw::BallTruncation;
  if (n_max < 2) throw std::invalid_argument("urw-ball: need --n >= 2");
  BallTruncation ball;
  std::string vertex_label;
  if (model == "tree") {
    ball = BallTruncation::tree_ball(d, shell + n_max, sigma);
    vertex_label = "shell" + std::to_string(shell);
  } else if (model == "canopy") {
    if (shell < 1) throw std::invalid_argument("urw-ball canopy: need --shell >= 1");
    if (sigma != 0.0) throw std::invalid_argument("urw-ball canopy: no loops");
    ball = BallTruncation::canopy_levels(d, shell + n_max);
    vertex_label = "level" + std::to_string(shell);
  } else if (model == "lattice") {
    if (static_cast<int>(site.size()) != dim) {
      throw std::invalid_argument("urw-ball lattice: --at needs dim coordinates");
    }
    int dist = 0;
    for (int c : site) dist += std::abs(c);
    ball = BallTruncation::lattice_ball(dim, dist + n_max, sigma);
    std::ostringstream lbl;
    lbl << "site";
    for (int c : site) lbl << "_" << c;
    vertex_label = lbl.str();
  } else {
    throw std::invalid_argument("urw-ball --model must be tree, lattice or canopy");
  }
  if (stride < 1) stride = std::max(1, n_max / 64);

  Output output(out);
  std::ostringstream echo;
  echo << "model=" << model << " d=" << d << " dim=" << dim
       << " sigma=" << fmt17(sigma) << " n=" << n_max << " stride=" << stride;
  write_header(output.stream(), "urw-ball", echo.str());
  output.stream() << "n,vertex,neighbor,ratio_raw,ratio_parity_avg,cauchy_delta\n";
  for (int n = 2; n <= n_max; n += stride) {
    const merw::UrwEstimate est =
        model == "lattice"
            ? merw::urw_estimate(ball, std::span<const int>(site), n)
            : merw::urw_estimate(ball, shell, n);
    for (const merw::UrwRatio& r : est.row) {
      std::string to = model == "lattice"
                           ? (r.to == 0 ? std::string("loop")
                                        : (r.to > 0 ? "+" : "-") +
                                              std::string("e") +
                                              std::to_string(std::abs(r.to)))
                           : std::to_string(r.to);
      output.stream() << n << "," << vertex_label << "," << to << ","
                      << fmt17(r.ratio_n) << "," << fmt17(r.parity_avg) << ","
                      << fmt17(r.cauchy_delta) << "\n";
    }
  }
  return 0;
}

void write_sweep(std::ostream& os, const merw::RankOneModel& model,
                 const std::vector<double>& grid, double tol, int threads) {
  const auto rows = merw::phase_sweep(model, grid, tol, threads);
  os << "sigma,sigma_star,sigma_l2,rho_sigma,r_sigma,phase\n";
  for (const auto& r : rows) {
    os << fmt17(r.sigma) << "," << fmt17(r.sigma_star) << "," << fmt17(r.sigma_l2)
       << "," << fmt17(r.rho_sigma) << "," << fmt17(r.r_sigma) << ","
       << merw::phase_name(r.phase) << "\n";
  }
}

int run_rank_one(const std::string& model, int d, int dim, double sigma,
                 const std::string& sigma_grid, int shells, double tol,
                 const std::string& out, int threads) {
  const merw::RankOneModel m = make_rank_one(model, d, dim);
  Output output(out);
  std::ostringstream echo;
  echo << "model=" << model << " d=" << d << " dim=" << dim << " tol=" << fmt17(tol);
  if (!sigma_grid.empty()) {
    echo << " sigma_grid=" << sigma_grid;
    write_header(output.stream(), "rank-one", echo.str());
    write_sweep(output.stream(), m, merw::parse_grid(sigma_grid), tol, threads);
    return 0;
  }
  echo << " sigma=" << fmt17(sigma);
  write_header(output.stream(), "rank-one", echo.str());
  const merw::PhaseReport rep = m.classify_phase(sigma);
  auto& os = output.stream();
  os << "quantity,value\n";
  os << "sigma," << fmt17(rep.sigma) << "\n";
  os << "sigma_star," << fmt17(rep.sigma_star) << "\n";
  os << "sigma_l2," << fmt17(rep.sigma_l2) << "\n";
  os << "rho_sigma," << fmt17(rep.rho_sigma) << "\n";
  os << "r_sigma," << fmt17(rep.r_sigma) << "\n";
  os << "phase," << merw::phase_name(rep.phase) << "\n";
  os << "widened_tolerance," << (rep.widened_tolerance ? 1 : 0) << "\n";
  if (!rep.stationary_profile.empty()) {
    os << "shell,stationary_weight\n";
    for (std::size_t k = 0; k < rep.stationary_profile.size(); ++k) {
      os << k << "," << fmt17(rep.stationary_profile[k]) << "\n";
    }
  }
  if (model == "tree") {
    os << "shell,to,per_edge_prob,multiplicity\n";
    for (int at = 0; at <= shells; ++at) {
      for (const auto& e : m.kernel_row(sigma, at, tol)) {
        os << at << "," << (e.is_loop ? "loop" : std::to_string(e.to)) << ","
           << fmt17(e.prob) << "," << e.multiplicity << "\n";
      }
    }
  }
  return 0;
}

int run_canopy(int d, long steps, int seeds, std::uint64_t seed_base,
               int threads, const std::string& out) {
  if (steps < 10000) throw std::invalid_argument("canopy: need --steps >= 10000");
  if (seeds < 1) throw std::invalid_argument("canopy: need --seeds >= 1");
  std::vector<merw::CanopyTrajectory> rows(seeds);
  merw::parallel_for(seeds, threads, [&](std::size_t i) {
    rows[i] = merw::simulate_canopy(d, steps, seed_base + i);
  });
  Output output(out);
  std::ostringstream echo;
  echo << "d=" << d << " steps=" << steps << " seeds=" << seeds
       << " seed_base=" << seed_base;
  write_header(output.stream(), "canopy", echo.str());
  output.stream()
      << "seed,steps,up_frequency,entropy_rate_mc,final_level,displacement_over_sqrt_n\n";
  for (const auto& t : rows) {
    output.stream() << t.seed << "," << t.steps << "," << fmt17(t.up_frequency)
                    << "," << fmt17(t.entropy_rate) << "," << t.final_level << ","
                    << fmt17(t.displacement_over_sqrt_n) << "\n";
  }
  return 0;
}

int run_entropy(const GraphArgs& graph_args, const std::string& kernel_kind,
                int n_max, double tol, const std::string& out,
                const std::string& format) {
  const merw::WeightedGraph g = graph_args.build();
  merw::PowerIterOptions opt;
  opt.tol = tol;
  const merw::MerwReport ref = merw::merw(g, opt);
  merw::MarkovKernel kernel =
      kernel_kind == "srw" ? merw::srw_kernel(g) : ref.kernel;
  const merw::EntropyReport rep = merw::walk_entropy(g, kernel, n_max);
  const double gap = merw::kl_gap(g, kernel, ref);
  const merw::TopEntropyDiag top =
      merw::topological_entropy(g, 0, std::max(8, std::min(n_max, 400)));

  Output output(out);
  if (format == "csv") {
    write_header(output.stream(), "entropy",
                 graph_args.echo() + " kernel=" + kernel_kind +
                     " n=" + std::to_string(n_max));
    output.stream() << "vertex,h_n,rate\n";
    for (merw::Vertex x = 0; x < g.vertex_count(); ++x) {
      output.stream() << x << "," << fmt17(rep.h_n[x]) << ","
                      << fmt17(rep.rate_diff2[x]) << "\n";
    }
    output.stream() << "h_top," << fmt17(top.diff_parity) << "\n";
    output.stream() << "kl_gap," << fmt17(gap) << "\n";
    return 0;
  }
  auto& os = output.stream();
  os << "{\"n\":" << n_max << ",\"per_vertex_entropy\":[";
  for (merw::Vertex x = 0; x < g.vertex_count(); ++x) {
    os << (x ? "," : "") << fmt17(rep.h_n[x]);
  }
  os << "],\"rate\":[";
  for (merw::Vertex x = 0; x < g.vertex_count(); ++x) {
    os << (x ? "," : "") << fmt17(rep.rate_diff2[x]);
  }
  os << "],\"h_top\":" << fmt17(top.diff_parity) << ",\"kl_gap\":" << fmt17(gap)
     << "}\n";
  return 0;
}

int run_bs(int d, const std::vector<int>& sizes, double sigma,
           const std::string& omega, int seeds, std::uint64_t seed_base,
           int threads, double tol, const std::string& out) {
  merw::SequenceConfig cfg;
  cfg.d = d;
  cfg.sizes = sizes;
  cfg.sigma = sigma;
  cfg.threads = threads;
  cfg.tol = tol;
  if (omega == "single") {
    cfg.omega = merw::OmegaRule::single_site;
  } else if (omega.rfind("iid:", 0) == 0) {
    cfg.omega = merw::OmegaRule::iid;
    cfg.iid_p = std::stod(omega.substr(4));
    if (cfg.iid_p <= 0.0 || cfg.iid_p >= 1.0) {
      throw std::invalid_argument("bs-experiment: iid p must be in (0,1)");
    }
  } else {
    throw std::invalid_argument("bs-experiment: --omega must be single or iid:<p>");
  }
  for (int s = 0; s < seeds; ++s) cfg.seeds.push_back(seed_base + s);

  const auto records = merw::sequence_experiment(cfg);
  Output output(out);
  std::ostringstream echo;
  echo << "d=" << d << " sigma=" << fmt17(sigma) << " omega=" << omega
       << " seeds=" << seeds << " seed_base=" << seed_base;
  write_header(output.stream(), "bs-experiment", echo.str());
  output.stream() << "n,seed,rho_n,lambda2_n,margin,tv_mean,tv_p95,"
                     "energy_median,energy_iqr,predicted_rho\n";
  for (const auto& r : records) {
    output.stream() << r.n << "," << r.seed << "," << fmt17(r.rho_n) << ","
                    << fmt17(r.lambda2_n) << "," << fmt17(r.margin) << ","
                    << fmt17(r.tv_mean) << "," << fmt17(r.tv_p95) << ","
                    << fmt17(r.energy_median) << "," << fmt17(r.energy_iqr) << ","
                    << fmt17(r.predicted_rho) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random-walk experiments: MERW spectra, walk-count ratio limits, "
               "rank-one phase diagrams, canopy trajectories"};
  app.require_subcommand(1);
  app.fallthrough();  // accept app-level flags (--threads) after a subcommand

  int threads = merw::default_thread_count();
  app.add_option("--threads", threads, "worker threads (env MERWLAB_THREADS)");

  // merw
  auto* cmd_merw = app.add_subcommand("merw", "principal eigenpair, kernel, pi, KS entropy");
  GraphArgs merw_graph;
  merw_graph.attach(cmd_merw);
  std::string merw_out, merw_format = "json";
  double merw_tol = 1e-12;
  long merw_max_iters = 0;
  cmd_merw->add_option("--out", merw_out, "output path (default stdout)");
  cmd_merw->add_option("--format", merw_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_merw->add_option("--tol", merw_tol, "power-iteration residual");
  cmd_merw->add_option("--max-iters", merw_max_iters, "iteration budget override");

  // urw-ball
  auto* cmd_ball = app.add_subcommand("urw-ball", "walk-count ratio rows on exact truncations");
  std::string ball_model = "tree", ball_out;
  int ball_d = 4, ball_dim = 3, ball_shell = 0, ball_n = 60, ball_stride = 0;
  double ball_sigma = 0.0;
  std::vector<int> ball_site;
  cmd_ball->add_option("--model", ball_model, "tree|lattice|canopy");
  cmd_ball->add_option("--d", ball_d, "branching degree");
  cmd_ball->add_option("--dim", ball_dim, "lattice dimension");
  cmd_ball->add_option("--sigma", ball_sigma, "loop weight at the center");
  cmd_ball->add_option("--shell", ball_shell, "probed shell / level");
  cmd_ball->add_option("--at", ball_site, "lattice site coordinates")->delimiter(',');
  cmd_ball->add_option("--n", ball_n, "ratio horizon");
  cmd_ball->add_option("--stride", ball_stride, "emit every k-th n (default n/64)");
  cmd_ball->add_option("--out", ball_out, "output path");

  // rank-one + sweep
  std::string ro_model = "tree", ro_grid, ro_out;
  int ro_d = 4, ro_dim = 3, ro_shells = 8;
  double ro_sigma = 0.0, ro_tol = 1e-12;
  auto* cmd_ro = app.add_subcommand("rank-one", "thresholds, growth, kernel and phase");
  cmd_ro->add_option("--model", ro_model, "tree|lattice");
  cmd_ro->add_option("--d", ro_d, "tree branching");
  cmd_ro->add_option("--dim", ro_dim, "lattice dimension");
  cmd_ro->add_option("--sigma", ro_sigma, "loop weight");
  cmd_ro->add_option("--sigma-grid", ro_grid, "start:stop:step (switches to sweep output)");
  cmd_ro->add_option("--shells", ro_shells, "kernel rows to print");
  cmd_ro->add_option("--tol", ro_tol, "root solve tolerance");
  cmd_ro->add_option("--out", ro_out, "output path");

  std::string sweep_model = "tree", sweep_grid = "0:4:0.05", sweep_out;
  int sweep_d = 4, sweep_dim = 3;
  double sweep_tol = 1e-12;
  auto* cmd_sweep = app.add_subcommand("sweep", "phase-diagram sweep over sigma");
  cmd_sweep->add_option("--model", sweep_model, "tree|lattice");
  cmd_sweep->add_option("--d", sweep_d, "tree branching");
  cmd_sweep->add_option("--dim", sweep_dim, "lattice dimension");
  cmd_sweep->add_option("--sigma-grid", sweep_grid, "start:stop:step");
  cmd_sweep->add_option("--tol", sweep_tol, "root solve tolerance");
  cmd_sweep->add_option("--out", sweep_out, "output path");

  // canopy
  auto* cmd_canopy = app.add_subcommand("canopy", "canopy-tree trajectory statistics");
  int canopy_d = 3, canopy_seeds = 8;
  long canopy_steps = 1000000;
  std::uint64_t canopy_seed_base = 1;
  std::string canopy_out;
  cmd_canopy->add_option("--d", canopy_d, "branching degree");
  cmd_canopy->add_option("--steps", canopy_steps, "steps per trajectory");
  cmd_canopy->add_option("--seeds", canopy_seeds, "number of seeded runs");
  cmd_canopy->add_option("--seed", canopy_seed_base, "first seed");
  cmd_canopy->add_option("--out", canopy_out, "output path");

  // entropy
  auto* cmd_entropy = app.add_subcommand("entropy", "walk entropies, rates, KL gap");
  GraphArgs ent_graph;
  ent_graph.attach(cmd_entropy);
  std::string ent_kernel = "merw", ent_out, ent_format = "json";
  int ent_n = 256;
  double ent_tol = 1e-12;
  cmd_entropy->add_option("--kernel", ent_kernel, "srw|merw")
      ->check(CLI::IsMember({"srw", "merw"}));
  cmd_entropy->add_option("--walk-n", ent_n, "entropy horizon n");
  cmd_entropy->add_option("--tol", ent_tol, "solver tolerance");
  cmd_entropy->add_option("--out", ent_out, "output path");
  cmd_entropy->add_option("--format", ent_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // bs-experiment
  auto* cmd_bs = app.add_subcommand("bs-experiment",
                                    "MERW of loop-perturbed configuration-model sequences");
  int bs_d = 4, bs_seeds = 4;
  std::vector<int> bs_sizes{500, 1000, 2000, 4000};
  double bs_sigma = 1.0, bs_tol = 1e-12;
  std::string bs_omega = "single", bs_out;
  std::uint64_t bs_seed_base = 1;
  cmd_bs->add_option("--d", bs_d, "regular degree");
  cmd_bs->add_option("--sizes", bs_sizes, "graph sizes")->delimiter(',');
  cmd_bs->add_option("--sigma", bs_sigma, "loop weight");
  cmd_bs->add_option("--omega", bs_omega, "single | iid:<p>");
  cmd_bs->add_option("--seeds", bs_seeds, "seeds per size");
  cmd_bs->add_option("--seed", bs_seed_base, "first seed");
  cmd_bs->add_option("--tol", bs_tol, "power-iteration residual");
  cmd_bs->add_option("--out", bs_out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_merw->parsed()) {
      return run_merw(merw_graph, merw_out, merw_format, merw_tol, merw_max_iters);
    }
    if (cmd_ball->parsed()) {
      return run_urw_ball(ball_model, ball_d, ball_dim, ball_sigma, ball_shell,
                          ball_site, ball_n, ball_stride, ball_out);
    }
    if (cmd_ro->parsed()) {
      return run_rank_one(ro_model, ro_d, ro_dim, ro_sigma, ro_grid, ro_shells,
                          ro_tol, ro_out, threads);
    }
    if (cmd_sweep->parsed()) {
      const merw::RankOneModel m = make_rank_one(sweep_model, sweep_d, sweep_dim);
      Output output(sweep_out);
      write_header(output.stream(), "sweep",
                   "model=" + sweep_model + " d=" + std::to_string(sweep_d) +
                       " dim=" + std::to_string(sweep_dim) +
                       " sigma_grid=" + sweep_grid);
      write_sweep(output.stream(), m, merw::parse_grid(sweep_grid), sweep_tol, threads);
      return 0;
    }
    if (cmd_canopy->parsed()) {
      return run_canopy(canopy_d, canopy_steps, canopy_seeds, canopy_seed_base,
                        threads, canopy_out);
    }
    if (cmd_entropy->parsed()) {
      return run_entropy(ent_graph, ent_kernel, ent_n, ent_tol, ent_out, ent_format);
    }
    if (cmd_bs->parsed()) {
      return run_bs(bs_d, bs_sizes, bs_sigma, bs_omega, bs_seeds, bs_seed_base,
                    threads, bs_tol, bs_out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "merwlab: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "merwlab: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
