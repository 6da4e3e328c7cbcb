#ifndef NAHMLAB_GRID_HPP
#define NAHMLAB_GRID_HPP

#include "nahmlab/lie.hpp"

#include <vector>

namespace nahmlab {

// Sampling grid on [0, L] or on a truncated half-line. Half-line grids are
// geometric in 1+t, t_k = (1+T)^(k/N) - 1, so each decade of 1+t gets the
// same resolution; that is where the 1/(t+1) tails vary fastest.
struct Grid {
  enum class Kind { Interval, HalfLine };
  Kind kind = Kind::Interval;
  std::vector<double> nodes;

  static Grid interval(double length, int n_nodes);
  static Grid half_line(double t_max = 40.0, int n_nodes = 2048);

  int size() const { return static_cast<int>(nodes.size()); }
  double t_max() const { return nodes.back(); }
  bool is_half_line() const { return kind == Kind::HalfLine; }
};

bool same_grid(const Grid& a, const Grid& b, double tol = 1e-12);
void require_same_grid(const Grid& a, const Grid& b, const char* what);
void require_min_nodes(const Grid& g, const char* what);

/// Finite-difference weights for the m-th derivative at x0 from the given
/// nodes (Fornberg's recursion). Row d of the result holds the weights for
/// derivative order d, 0 <= d <= max_order.
Eigen::MatrixXd fd_weights(double x0, const std::vector<double>& xs, int max_order);

/// Derivative of a sampled path, fourth order on arbitrary grids: five-point
/// stencils, windows clamped at the ends.
std::vector<CMatrix> path_derivative(const Grid& g, const std::vector<CMatrix>& f);
std::vector<double> scalar_derivative(const Grid& g, const std::vector<double>& f);

/// Second derivative, six-point windows (fourth order).
std::vector<CMatrix> path_second_derivative(const Grid& g, const std::vector<CMatrix>& f);

/// Trapezoid rule over the whole grid, or over nodes with t <= t_end.
double trapezoid(const Grid& g, const std::vector<double>& f);
double trapezoid_until(const Grid& g, const std::vector<double>& f, double t_end);

/// Value of a sampled path at an off-node time by local cubic interpolation.
CMatrix interpolate(const Grid& g, const std::vector<CMatrix>& f, double t);

double sup_norm(const std::vector<CMatrix>& f);

}  // namespace nahmlab

#endif
