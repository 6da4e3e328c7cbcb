#include "nahmlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nahmlab {

Grid Grid::interval(double length, int n_nodes) {
  if (length <= 0) throw std::invalid_argument("Grid::interval: length must be positive");
  if (n_nodes < 16) throw std::invalid_argument("Grid::interval: need at least 16 nodes");
  Grid g;
  g.kind = Kind::Interval;
  g.nodes.resize(n_nodes);
  for (int k = 0; k < n_nodes; ++k)
    g.nodes[k] = length * double(k) / double(n_nodes - 1);
  g.nodes.back() = length;
  return g;
}

Grid Grid::half_line(double t_max, int n_nodes) {
  if (t_max <= 0) throw std::invalid_argument("Grid::half_line: t_max must be positive");
  if (n_nodes < 16) throw std::invalid_argument("Grid::half_line: need at least 16 nodes");
  Grid g;
  g.kind = Kind::HalfLine;
  g.nodes.resize(n_nodes);
  const double l = std::log1p(t_max);
  for (int k = 0; k < n_nodes; ++k)
    g.nodes[k] = std::expm1(l * double(k) / double(n_nodes - 1));
  g.nodes.front() = 0.0;
  g.nodes.back() = t_max;
  return g;
}

bool same_grid(const Grid& a, const Grid& b, double tol) {
  if (a.kind != b.kind || a.nodes.size() != b.nodes.size()) return false;
  for (size_t k = 0; k < a.nodes.size(); ++k)
    if (std::abs(a.nodes[k] - b.nodes[k]) > tol) return false;
  return true;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!same_grid(a, b))
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

void require_min_nodes(const Grid& g, const char* what) {
  if (g.size() < 16)
    throw std::invalid_argument(std::string(what) + ": grid too coarse (< 16 nodes)");
}

Eigen::MatrixXd fd_weights(double x0, const std::vector<double>& xs, int max_order) {
  // B. Fornberg, "Generation of finite difference formulas on arbitrarily
  // spaced grids", Math. Comp. 51 (1988).
  const int n = static_cast<int>(xs.size()) - 1;
  const int m = max_order;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m + 1, n + 1);
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c(0, 0) = 1.0;
  for (int i = 1; i <= n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j <= i - 1; ++j) {
      double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
        c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
      }
      for (int k = mn; k >= 1; --k)
        c(k, j) = (c4 * c(k, j) - k * c(k - 1, j)) / c3;
      c(0, j) = c4 * c(0, j) / c3;
    }
    c1 = c2;
  }
  return c;
}

namespace {

constexpr int kStencil = 5;

// Start index of the 5-point window for node k, clamped to the grid.
inline int window_start(int k, int n) {
  int s = k - kStencil / 2;
  return std::max(0, std::min(s, n - kStencil));
}

}  // namespace

std::vector<CMatrix> path_derivative(const Grid& g, const std::vector<CMatrix>& f) {
  const int n = g.size();
  if (static_cast<int>(f.size()) != n)
    throw std::invalid_argument("path_derivative: sample count mismatch");
  require_min_nodes(g, "path_derivative");
  std::vector<CMatrix> out(n);
  std::vector<double> xs(kStencil);
  for (int k = 0; k < n; ++k) {
    int s = window_start(k, n);
    for (int j = 0; j < kStencil; ++j) xs[j] = g.nodes[s + j];
    Eigen::MatrixXd w = fd_weights(g.nodes[k], xs, 1);
    // weights sum to zero, so differencing against f[k] drops the O(|f|/h)
    // cancellation error
    CMatrix d = CMatrix::Zero(f[k].rows(), f[k].cols());
    for (int j = 0; j < kStencil; ++j) {
      if (s + j == k) continue;
      d += w(1, j) * (f[s + j] - f[k]);
    }
    out[k] = std::move(d);
  }
  return out;
}

std::vector<CMatrix> path_second_derivative(const Grid& g, const std::vector<CMatrix>& f) {
  const int n = g.size();
  if (static_cast<int>(f.size()) != n)
    throw std::invalid_argument("path_second_derivative: sample count mismatch");
  require_min_nodes(g, "path_second_derivative");
  constexpr int kWide = 6;
  std::vector<CMatrix> out(n);
  std::vector<double> xs(kWide);
  for (int k = 0; k < n; ++k) {
    int s = std::max(0, std::min(k - kWide / 2, n - kWide));
    for (int j = 0; j < kWide; ++j) xs[j] = g.nodes[s + j];
    Eigen::MatrixXd w = fd_weights(g.nodes[k], xs, 2);
    CMatrix d = CMatrix::Zero(f[k].rows(), f[k].cols());
    for (int j = 0; j < kWide; ++j) {
      if (s + j == k) continue;
      d += w(2, j) * (f[s + j] - f[k]);
    }
    out[k] = std::move(d);
  }
  return out;
}

std::vector<double> scalar_derivative(const Grid& g, const std::vector<double>& f) {
  const int n = g.size();
  std::vector<double> out(n);
  std::vector<double> xs(kStencil);
  for (int k = 0; k < n; ++k) {
    int s = window_start(k, n);
    for (int j = 0; j < kStencil; ++j) xs[j] = g.nodes[s + j];
    Eigen::MatrixXd w = fd_weights(g.nodes[k], xs, 1);
    double d = 0;
    for (int j = 0; j < kStencil; ++j) {
      if (s + j == k) continue;
      d += w(1, j) * (f[s + j] - f[k]);
    }
    out[k] = d;
  }
  return out;
}

double trapezoid(const Grid& g, const std::vector<double>& f) {
  double s = 0;
  for (size_t k = 0; k + 1 < g.nodes.size(); ++k)
    s += 0.5 * (g.nodes[k + 1] - g.nodes[k]) * (f[k] + f[k + 1]);
  return s;
}

double trapezoid_until(const Grid& g, const std::vector<double>& f, double t_end) {
  double s = 0;
  for (size_t k = 0; k + 1 < g.nodes.size(); ++k) {
    if (g.nodes[k] >= t_end) break;
    double t1 = g.nodes[k + 1];
    if (t1 <= t_end) {
      s += 0.5 * (t1 - g.nodes[k]) * (f[k] + f[k + 1]);
    } else {
      // partial panel, linear model of f
      double h = t1 - g.nodes[k];
      double w = t_end - g.nodes[k];
      double f_end = f[k] + (f[k + 1] - f[k]) * (w / h);
      s += 0.5 * w * (f[k] + f_end);
      break;
    }
  }
  return s;
}

CMatrix interpolate(const Grid& g, const std::vector<CMatrix>& f, double t) {
  const int n = g.size();
  auto it = std::upper_bound(g.nodes.begin(), g.nodes.end(), t);
  int k = std::max<int>(0, int(it - g.nodes.begin()) - 1);
  int s = std::max(0, std::min(k - 1, n - 4));
  std::vector<double> xs(g.nodes.begin() + s, g.nodes.begin() + s + 4);
  Eigen::MatrixXd w = fd_weights(t, xs, 0);
  CMatrix out = w(0, 0) * f[s];
  for (int j = 1; j < 4; ++j) out += w(0, j) * f[s + j];
  return out;
}

double sup_norm(const std::vector<CMatrix>& f) {
  double m = 0;
  for (const auto& x : f) m = std::max(m, x.cwiseAbs().maxCoeff());
  return m;
}

}  // namespace nahmlab
