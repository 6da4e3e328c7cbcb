#include "nahmlab/nahm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nahmlab {

TangentAsymptotics zero_tangent_asym(int n) {
  TangentAsymptotics a;
  for (auto& m : a.delta) m = CMatrix::Zero(n, n);
  for (auto& m : a.eps) m = CMatrix::Zero(n, n);
  return a;
}

void validate_tangent_asym(const TangentAsymptotics& a, const Stratum& s, double tol) {
  for (const auto& d : a.delta)
    if (!s.in_center(d, tol))
      throw std::invalid_argument("tangent asymptotics: delta outside Z(c)");
  for (const auto& e : a.eps)
    if (!s.in_commutator(e, tol))
      throw std::invalid_argument("tangent asymptotics: eps outside [c,c]");
  for (int i = 0; i < 4; ++i)
    if (std::abs(inner(a.delta[i], a.eps[i])) > tol)
      throw std::invalid_argument("tangent asymptotics: <delta_i, eps_i> != 0");
}

NahmPath model_solution(const CMatrix& tau0, const std::array<CMatrix, 3>& tau,
                        const Su2Triple& sigma, const Grid& grid) {
  if (!grid.is_half_line())
    throw std::invalid_argument("model_solution: needs a half-line grid");
  Stratum s = centralizer_blocks(tau);
  require_su2_triple(sigma, s);
  if (!s.in_center(tau0, 1e-10))
    throw std::invalid_argument("model_solution: tau0 outside Z(c)");

  NahmPath t;
  t.grid = grid;
  t.samples.resize(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    double c = 1.0 / (2.0 * (grid.nodes[k] + 1.0));
    t.samples[k][0] = tau0;
    for (int i = 0; i < 3; ++i) t.samples[k][i + 1] = tau[i] + c * sigma.sigma[i];
  }
  t.asym = NahmAsymptotics{tau0, tau, sigma, std::move(s)};
  return t;
}

std::array<std::vector<CMatrix>, 3> nahm_residual(const NahmPath& t) {
  require_min_nodes(t.grid, "nahm_residual");
  const int n = t.grid.size();
  std::array<std::vector<CMatrix>, 3> out;

  std::array<std::vector<CMatrix>, 4> comp;
  for (int i = 0; i < 4; ++i) {
    comp[i].resize(n);
    for (int k = 0; k < n; ++k) comp[i][k] = t.samples[k][i];
  }
  std::array<std::vector<CMatrix>, 3> dt;
  for (int i = 0; i < 3; ++i) dt[i] = path_derivative(t.grid, comp[i + 1]);

  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, l = (i + 2) % 3;
    out[i].resize(n);
    for (int k = 0; k < n; ++k)
      out[i][k] = dt[i][k] + bracket(comp[0][k], comp[i + 1][k]) -
                  bracket(comp[j + 1][k], comp[l + 1][k]);
  }
  return out;
}

double nahm_residual_sup(const NahmPath& t) {
  auto r = nahm_residual(t);
  return std::max({sup_norm(r[0]), sup_norm(r[1]), sup_norm(r[2])});
}

namespace {

constexpr double kBlowUpGuard = 1e6;

std::array<CMatrix, 3> nahm_rhs(const CMatrix& t0, const std::array<CMatrix, 3>& t) {
  std::array<CMatrix, 3> out;
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, l = (i + 2) % 3;
    out[i] = bracket(t[j], t[l]) - bracket(t0, t[i]);
  }
  return out;
}

}  // namespace

NahmPath integrate_nahm_ivp(const Quadruple& initial,
                            const std::function<CMatrix(double)>& t0_of_t,
                            const Grid& grid) {
  require_min_nodes(grid, "integrate_nahm_ivp");
  NahmPath out;
  out.grid = grid;
  out.samples.resize(grid.size());

  std::array<CMatrix, 3> y = {initial[1], initial[2], initial[3]};
  out.samples[0] = {t0_of_t(grid.nodes[0]), y[0], y[1], y[2]};

  for (int k = 0; k + 1 < grid.size(); ++k) {
    const double t = grid.nodes[k];
    const double h = grid.nodes[k + 1] - t;
    const CMatrix a0 = t0_of_t(t);
    const CMatrix am = t0_of_t(t + 0.5 * h);
    const CMatrix a1 = t0_of_t(t + h);

    auto k1 = nahm_rhs(a0, y);
    std::array<CMatrix, 3> y2, y3, y4;
    for (int i = 0; i < 3; ++i) y2[i] = y[i] + 0.5 * h * k1[i];
    auto k2 = nahm_rhs(am, y2);
    for (int i = 0; i < 3; ++i) y3[i] = y[i] + 0.5 * h * k2[i];
    auto k3 = nahm_rhs(am, y3);
    for (int i = 0; i < 3; ++i) y4[i] = y[i] + h * k3[i];
    auto k4 = nahm_rhs(a1, y4);
    for (int i = 0; i < 3; ++i)
      y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    for (int i = 0; i < 3; ++i)
      if (y[i].cwiseAbs().maxCoeff() > kBlowUpGuard)
        throw BlowUpError("integrate_nahm_ivp: component norm exceeded 1e6 at t = " +
                          std::to_string(grid.nodes[k + 1]));
    out.samples[k + 1] = {a1, y[0], y[1], y[2]};
  }
  return out;
}

NahmPath integrate_nahm_ivp(const Quadruple& initial, const CMatrix& t0_const,
                            const Grid& grid) {
  return integrate_nahm_ivp(initial, [&](double) { return t0_const; }, grid);
}

std::array<std::vector<CMatrix>, 3> linearized_nahm_residual(const NahmPath& t,
                                                             const TangentVector& x) {
  require_same_grid(t.grid, x.grid, "linearized_nahm_residual");
  const int n = t.grid.size();

  std::array<std::vector<CMatrix>, 3> dx;
  for (int i = 0; i < 3; ++i) {
    std::vector<CMatrix> comp(n);
    for (int k = 0; k < n; ++k) comp[k] = x.samples[k][i + 1];
    dx[i] = path_derivative(x.grid, comp);
  }

  std::array<std::vector<CMatrix>, 3> out;
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, l = (i + 2) % 3;
    out[i].resize(n);
    for (int k = 0; k < n; ++k) {
      const auto& tk = t.samples[k];
      const auto& xk = x.samples[k];
      out[i][k] = dx[i][k] + bracket(tk[0], xk[i + 1]) + bracket(xk[0], tk[i + 1]) -
                  bracket(tk[j + 1], xk[l + 1]) - bracket(xk[j + 1], tk[l + 1]);
    }
  }
  return out;
}

std::vector<CMatrix> horizontality_residual(const NahmPath& t, const TangentVector& x) {
  require_same_grid(t.grid, x.grid, "horizontality_residual");
  const int n = t.grid.size();
  std::vector<CMatrix> x0(n);
  for (int k = 0; k < n; ++k) x0[k] = x.samples[k][0];
  auto dx0 = path_derivative(x.grid, x0);
  std::vector<CMatrix> out(n);
  for (int k = 0; k < n; ++k) {
    out[k] = dx0[k];
    for (int i = 0; i < 4; ++i)
      out[k] += bracket(t.samples[k][i], x.samples[k][i]);
  }
  return out;
}

DecayReport decay_diagnostics(const Grid& grid, const std::vector<CMatrix>& f,
                              const Stratum& s) {
  if (!grid.is_half_line() || grid.t_max() < 20.0)
    throw std::invalid_argument("decay_diagnostics: needs a half-line grid with t_max >= 20");
  const int n = grid.size();
  const double t_start = 0.5 * grid.t_max();

  std::vector<double> dn(n), hn(n);
  for (int k = 0; k < n; ++k) {
    auto sp = project_stratum(f[k], s);
    dn[k] = ip_norm(sp.d0 + sp.d1);
    hn[k] = ip_norm(sp.h);
  }

  const double inf = std::numeric_limits<double>::infinity();
  DecayReport rep;

  // least-squares line y = a + b x over the tail
  auto fit = [&](auto xval, const std::vector<double>& norms, double floor_tol,
                 double& slope, double& res) -> bool {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int k = 0; k < n; ++k) {
      if (grid.nodes[k] < t_start) continue;
      if (norms[k] <= floor_tol) continue;
      double xv = xval(grid.nodes[k]), yv = std::log(norms[k]);
      sx += xv;
      sy += yv;
      sxx += xv * xv;
      sxy += xv * yv;
      ++m;
    }
    if (m < 4) return false;
    double det = m * sxx - sx * sx;
    slope = (m * sxy - sx * sy) / det;
    double a = (sy - slope * sx) / m;
    double rr = 0;
    for (int k = 0; k < n; ++k) {
      if (grid.nodes[k] < t_start || norms[k] <= floor_tol) continue;
      double e = std::log(norms[k]) - (a + slope * xval(grid.nodes[k]));
      rr += e * e;
    }
    res = std::sqrt(rr / m);
    return true;
  };

  double slope, res;
  if (fit([](double t) { return std::log1p(t); }, dn, 1e-14, slope, res)) {
    rep.zeta_fit = -slope - 1.0;
    rep.zeta_fit_residual = res;
  } else {
    rep.zeta_fit = inf;
  }
  if (fit([](double t) { return t; }, hn, 1e-280, slope, res)) {
    rep.eta_fit = -slope;
    rep.eta_fit_residual = res;
  } else {
    rep.eta_fit = inf;
  }

  if (std::isfinite(rep.zeta_fit))
    for (int k = 0; k < n; ++k)
      rep.d_weighted_sup = std::max(
          rep.d_weighted_sup, std::pow(1.0 + grid.nodes[k], 1.0 + rep.zeta_fit) * dn[k]);
  if (std::isfinite(rep.eta_fit))
    for (int k = 0; k < n; ++k) {
      double w = std::exp(std::min(rep.eta_fit * grid.nodes[k], 600.0));
      rep.h_weighted_sup = std::max(rep.h_weighted_sup, w * hn[k]);
    }
  return rep;
}

double asymptotic_gap(const NahmPath& t) {
  if (!t.asym) throw std::invalid_argument("asymptotic_gap: no asymptotics record");
  const auto& a = *t.asym;
  const double c = 1.0 / (2.0 * (t.grid.t_max() + 1.0));
  double gap = (t.samples.back()[0] - a.tau0).cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i)
    gap = std::max(gap, (t.samples.back()[i + 1] - a.tau[i] - c * a.sigma.sigma[i])
                            .cwiseAbs()
                            .maxCoeff());
  return gap;
}

}  // namespace nahmlab
