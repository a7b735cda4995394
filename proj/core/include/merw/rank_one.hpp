#pragma once

#include <span>
#include <string>
#include <vector>

#include "merw/green.hpp"
#include "merw/graph.hpp"

namespace merw {

enum class Phase { transient, null_recurrent, positive_recurrent };
const char* phase_name(Phase p);

struct Thresholds {
  double sigma_star = 0.0;  // d / f_oo(1/d): walk growth leaves d above this
  double sigma_l2 = 0.0;    // r(A) / f_oo(1/r(A)): an l2 bound state appears
};

struct PhaseReport {
  double sigma_star = 0.0;
  double sigma_l2 = 0.0;
  double sigma = 0.0;
  double rho_sigma = 0.0;  // walk growth = max(d, r_sigma)
  double r_sigma = 0.0;    // spectral radius of A + sigma at the root
  Phase phase = Phase::transient;
  // localized phase, shell models: per-vertex stationary weight at distance
  // k, normalized to profile[0] = 1; pi(x) ~ f_ox(1/rho_sigma)^2
  std::vector<double> stationary_profile;
  bool widened_tolerance = false;  // series-backed lattice evaluation
};

struct RankOneRowEntry {
  int to = 0;            // shell distance (tree), vertex id (finite)
  double prob = 0.0;     // per-edge transition probability
  int multiplicity = 1;  // identical parallel edges (tree shells)
  bool is_loop = false;
};

// Loop perturbation H = A + sigma at a single root of a regular base graph:
// thresholds, growth rates, closed-form URW kernels, phase classification.
class RankOneModel {
 public:
  static RankOneModel tree(int d);
  static RankOneModel lattice(int dim, int series_terms = 0);
  static RankOneModel finite(WeightedGraph g, Vertex origin);

  double base_degree() const { return degree_; }
  double spectral_radius() const { return r_base_; }  // r(A)
  const GreenFunction& green() const { return green_; }
  bool lattice_series_backed() const { return green_.is_lattice(); }

  Thresholds thresholds() const;
  // max(d, r_sigma); for sigma > sigma_star the inverse of t f_oo(t) at 1/sigma
  double rho_sigma(double sigma, double tol = 1e-12) const;
  // r(A) until sigma_l2, then the same root on (0, 1/r(A))
  double r_sigma(double sigma, double tol = 1e-12) const;

  PhaseReport classify_phase(double sigma, int profile_shells = 32) const;

  // URW row at a shell (tree) or vertex (finite). Rows sum to 1.
  std::vector<RankOneRowEntry> kernel_row(double sigma, int at,
                                          double tol = 1e-12) const;
  // lattice row at an explicit site
  std::vector<RankOneRowEntry> kernel_row_lattice(double sigma,
                                                  std::span<const int> site,
                                                  double tol = 1e-12) const;

  // |sigma - sigma_star| <= 1e-9 d dispatches to the critical branch
  bool is_critical(double sigma) const;

 private:
  RankOneModel() = default;
  double diagonal_green(double t) const { return green_.diagonal(t); }
  double solve_growth_root(double sigma, double t_hi, double tol) const;

  enum class Kind { tree, lattice, finite } kind_ = Kind::tree;
  GreenFunction green_;
  double degree_ = 0.0;
  double r_base_ = 0.0;
  int dim_ = 0;
};

struct SweepRow {
  double sigma, sigma_star, sigma_l2, rho_sigma, r_sigma;
  Phase phase;
};

std::vector<SweepRow> phase_sweep(const RankOneModel& model,
                                  std::span<const double> sigma_grid,
                                  double tol = 1e-12, int threads = 1);

// start:stop:step inclusive of both ends (within half a step)
std::vector<double> parse_grid(const std::string& spec);

}  // namespace merw
