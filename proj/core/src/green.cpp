#include "merw/green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "merw/spectral.hpp"

namespace merw {

// --- TreeGreen --------------------------------------------------------------

TreeGreen::TreeGreen(int d) : d_(d) {
  if (d < 2) throw std::invalid_argument("TreeGreen: need d >= 2");
}

double TreeGreen::branch_point() const {
  return 1.0 / (2.0 * std::sqrt(static_cast<double>(d_ - 1)));
}

double TreeGreen::h(double t) const {
  if (t < 0.0 || t > branch_point() * (1.0 + 1e-15)) {
    throw std::invalid_argument("TreeGreen: t outside [0, 1/(2 sqrt(d-1))]");
  }
  const double q = static_cast<double>(d_ - 1);
  const double disc = std::max(0.0, 1.0 - 4.0 * q * t * t);
  // rationalized root of q t^2 h^2 - h + 1 = 0; no cancellation at t -> 0
  // and exact value 2 at the branch point
  return 2.0 / (1.0 + std::sqrt(disc));
}

double TreeGreen::f(double t, int dist) const {
  if (dist < 0) throw std::invalid_argument("TreeGreen: dist must be >= 0");
  const double ht = h(t);
  const double diag = 1.0 / (1.0 - d_ * t * t * ht);
  return diag * std::pow(t * ht, dist);
}

// --- LatticeGreen -----------------------------------------------------------

namespace {

// binomial pmf row, multiplicative recurrence spread out from the mode
void binomial_row(int n, double p, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(n) + 1, 0.0);
  if (n == 0) {
    out[0] = 1.0;
    return;
  }
  const int mode = std::min(n, static_cast<int>((n + 1) * p));
  const double logmode = std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) -
                         std::lgamma(n - mode + 1.0) + mode * std::log(p) +
                         (n - mode) * std::log1p(-p);
  out[mode] = std::exp(logmode);
  const double odds = p / (1.0 - p);
  for (int k = mode; k < n; ++k) {
    out[k + 1] = out[k] * odds * (n - k) / (k + 1.0);
    if (out[k + 1] == 0.0) break;
  }
  for (int k = mode; k > 0; --k) {
    out[k - 1] = out[k] / odds * k / (n - k + 1.0);
    if (out[k - 1] == 0.0) break;
  }
}

// 1-d +-1 walk: probability of displacement z after k steps, k = 0..terms
std::vector<double> one_dim_probs(int z, int terms) {
  std::vector<double> q(static_cast<std::size_t>(terms) + 1, 0.0);
  const int a = std::abs(z);
  if (a > terms) return q;
  q[a] = std::ldexp(1.0, -a);  // C(a, a) / 2^a
  for (int k = a; k + 2 <= terms; k += 2) {
    const int j = (k + 2 + a) / 2;
    q[k + 2] = q[k] * ((k + 2.0) * (k + 1.0)) / (4.0 * j * (k + 2.0 - j));
  }
  return q;
}

// mix a (m-1)-dimensional walk with an independent 1-d walk: condition on the
// number of steps assigned to the first block
std::vector<double> mix_dims(const std::vector<double>& lower, int lower_dim,
                             const std::vector<double>& one_d) {
  const int terms = static_cast<int>(lower.size()) - 1;
  const double p = static_cast<double>(lower_dim) / (lower_dim + 1);
  std::vector<double> out(lower.size(), 0.0);
  std::vector<double> b;
  for (int n = 0; n <= terms; ++n) {
    binomial_row(n, p, b);
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
      if (b[k] != 0.0) s += b[k] * lower[k] * one_d[n - k];
    }
    out[n] = s;
  }
  return out;
}

}  // namespace

LatticeGreen::LatticeGreen(int dim, int series_terms) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("LatticeGreen: need dim >= 1");
  if (dim > 8) throw std::invalid_argument("LatticeGreen: dim > 8 unsupported");
  terms_ = series_terms > 0 ? series_terms : (dim <= 3 ? 10000 : 4000);
  if (terms_ < 1000) terms_ = 1000;
  p0_ = one_dim_probs(0, terms_);
  for (int m = 1; m < dim_; ++m) {
    p0_ = mix_dims(p0_, m, one_dim_probs(0, terms_));
  }
}

std::vector<double> LatticeGreen::point_probs(std::span<const int> x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw std::invalid_argument("LatticeGreen: point dimension mismatch");
  }
  std::vector<double> probs = one_dim_probs(x[0], terms_);
  for (int m = 1; m < dim_; ++m) {
    probs = mix_dims(probs, m, one_dim_probs(x[m], terms_));
  }
  return probs;
}

LatticeGreen::Value LatticeGreen::sum_series(const std::vector<double>& probs,
                                             double t, int parity) const {
  const int d = degree();
  const double dt = d * t;
  if (t < 0.0 || dt > 1.0 + 1e-15) {
    throw std::invalid_argument(
        "LatticeGreen: t out of range, need 0 <= t <= 1/" + std::to_string(d));
  }
  Value out;
  if (dt < 1.0) {
    // geometric regime: f = sum_n P_n (dt)^n, remainder bounded by P_n <= 1
    double pw = 1.0;
    for (int n = 0; n <= terms_; ++n) {
      out.value += probs[n] * pw;
      pw *= dt;
    }
    out.error_bound = pw / (1.0 - dt);
    return out;
  }
  // SRW point: plain series plus a fitted c * n^{-dim/2} tail over the live
  // parity class (the complementary class is identically zero)
  if (dim_ <= 2 && parity == 0) {
    throw std::invalid_argument(
        "LatticeGreen: diagonal diverges at the SRW point in dims 1, 2");
  }
  for (int n = 0; n <= terms_; ++n) out.value += probs[n];
  const double half_dim = 0.5 * dim_;
  double c_min = 0.0, c_max = 0.0, c_sum = 0.0;
  int fitted = 0;
  for (int n = terms_ - (terms_ % 2 == parity ? 0 : 1); fitted < 64 && n > 2;
       n -= 2) {
    if (probs[n] <= 0.0) break;
    const double c = probs[n] * std::pow(static_cast<double>(n), half_dim);
    if (fitted == 0) {
      c_min = c_max = c;
    } else {
      c_min = std::min(c_min, c);
      c_max = std::max(c_max, c);
    }
    c_sum += c;
    ++fitted;
  }
  if (fitted == 0) {
    out.error_bound = std::numeric_limits<double>::infinity();
    return out;
  }
  const double c_hat = c_sum / fitted;
  // sum the tail explicitly far past the truncation, integral beyond that
  double tail = 0.0;
  const long far = 400L * terms_;
  for (long n = terms_ + 1; n <= far; ++n) {
    if ((n % 2) == parity) tail += std::pow(static_cast<double>(n), -half_dim);
  }
  tail += 0.5 * std::pow(static_cast<double>(far), 1.0 - half_dim) / (half_dim - 1.0);
  out.value += c_hat * tail;
  // dominant uncertainty: drift of the fitted coefficient plus its O(1/n) bias
  out.error_bound = tail * ((c_max - c_min) + c_hat * 8.0 / terms_);
  return out;
}

LatticeGreen::Value LatticeGreen::f_origin(double t) const {
  return sum_series(p0_, t, 0);
}

LatticeGreen::Value LatticeGreen::f_point(double t, std::span<const int> x) const {
  int dist = 0;
  for (int c : x) dist += std::abs(c);
  if (dist == 0) return f_origin(t);
  return sum_series(point_probs(x), t, dist % 2);
}

// --- FiniteGreen ------------------------------------------------------------

struct FiniteGreen::Cache {
  double t = -1.0;
  std::vector<double> lu;   // row-major LU factors of (1 - tA)
  std::vector<int> perm;
};

FiniteGreen::FiniteGreen(WeightedGraph g, Vertex origin)
    : g_(std::move(g)), origin_(origin) {
  if (origin_ < 0 || origin_ >= g_.vertex_count()) {
    throw std::invalid_argument("FiniteGreen: origin out of range");
  }
  if (!g_.connected()) throw std::invalid_argument("FiniteGreen: graph must be connected");
  if (g_.vertex_count() > 4000) {
    throw std::invalid_argument("FiniteGreen: dense solve limited to 4000 vertices");
  }
  rho_ = principal_pair(g_).rho;
}

const FiniteGreen::Cache& FiniteGreen::factor(double t) const {
  if (cache_ && cache_->t == t) return *cache_;
  const int n = g_.vertex_count();
  auto c = std::make_shared<Cache>();
  c->t = t;
  c->lu.assign(static_cast<std::size_t>(n) * n, 0.0);
  c->perm.resize(n);
  auto at = [&](int i, int j) -> double& {
    return c->lu[static_cast<std::size_t>(i) * n + j];
  };
  for (Vertex x = 0; x < n; ++x) {
    at(x, x) = 1.0 - t * g_.loop(x);
    const auto nb = g_.neighbors(x);
    const auto w = g_.edge_weights(x);
    for (std::size_t i = 0; i < nb.size(); ++i) at(x, nb[i]) = -t * w[i];
  }
  // LU with partial pivoting
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(at(i, k)) > std::abs(at(piv, k))) piv = i;
    }
    c->perm[k] = piv;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
    }
    const double pivot = at(k, k);
    if (pivot == 0.0) throw std::runtime_error("FiniteGreen: singular at this t");
    for (int i = k + 1; i < n; ++i) {
      const double m = at(i, k) / pivot;
      at(i, k) = m;
      if (m != 0.0) {
        for (int j = k + 1; j < n; ++j) at(i, j) -= m * at(k, j);
      }
    }
  }
  cache_ = std::move(c);
  return *cache_;
}

double FiniteGreen::f(double t, Vertex x, Vertex y) const {
  if (t < 0.0) throw std::invalid_argument("FiniteGreen: need t >= 0");
  if (t * rho_ >= 1.0) {
    throw std::invalid_argument("FiniteGreen: t must be below 1/rho(G)");
  }
  const Cache& c = factor(t);
  const int n = g_.vertex_count();
  std::vector<double> b(n, 0.0);
  b[y] = 1.0;
  for (int k = 0; k < n; ++k) {
    if (c.perm[k] != k) std::swap(b[k], b[c.perm[k]]);
  }
  for (int k = 0; k < n; ++k) {
    const double bk = b[k];
    if (bk != 0.0) {
      for (int i = k + 1; i < n; ++i) {
        b[i] -= c.lu[static_cast<std::size_t>(i) * n + k] * bk;
      }
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    double s = b[k];
    for (int j = k + 1; j < n; ++j) {
      s -= c.lu[static_cast<std::size_t>(k) * n + j] * b[j];
    }
    b[k] = s / c.lu[static_cast<std::size_t>(k) * n + k];
  }
  return b[x];
}

// --- GreenFunction ----------------------------------------------------------

GreenFunction GreenFunction::tree(int d) {
  GreenFunction g;
  g.tree_ = std::make_shared<TreeGreen>(d);
  return g;
}

GreenFunction GreenFunction::lattice(int dim, int series_terms) {
  GreenFunction g;
  g.lattice_ = std::make_shared<LatticeGreen>(dim, series_terms);
  return g;
}

GreenFunction GreenFunction::finite(WeightedGraph graph, Vertex origin) {
  GreenFunction g;
  g.finite_ = std::make_shared<FiniteGreen>(std::move(graph), origin);
  return g;
}

double GreenFunction::diagonal(double t) const {
  if (tree_) return tree_->f(t, 0);
  if (lattice_) return lattice_->f_origin(t).value;
  if (finite_) return finite_->f_origin_diag(t);
  throw std::logic_error("GreenFunction: empty");
}

}  // namespace merw
