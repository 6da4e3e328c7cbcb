#include "nahmlab/gauge.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace nahmlab {

GaugePath gauge_exp(const GaugeAlgebraPath& xi) {
  GaugePath u;
  u.grid = xi.grid;
  u.flavor = GaugeFlavor::Unitary;
  u.samples.resize(xi.samples.size());
  for (size_t k = 0; k < xi.samples.size(); ++k) u.samples[k] = exp_su(xi.samples[k]);
  if (xi.asym) u.slope = xi.asym->slope;
  return u;
}

GaugePath gauge_ray(const Grid& grid, const CMatrix& dir, const std::vector<double>& w,
                    const std::vector<double>& w_dot) {
  if (static_cast<int>(w.size()) != grid.size() || w.size() != w_dot.size())
    throw std::invalid_argument("gauge_ray: sample count mismatch");
  GaugePath u;
  u.grid = grid;
  u.flavor = GaugeFlavor::Unitary;
  u.samples.resize(grid.size());
  u.omega = std::vector<CMatrix>(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    u.samples[k] = exp_su(w[k] * dir);
    (*u.omega)[k] = w_dot[k] * dir;
  }
  return u;
}

GaugePath compose_gauge(const GaugePath& u, const GaugePath& v) {
  require_same_grid(u.grid, v.grid, "compose_gauge");
  GaugePath w;
  w.grid = u.grid;
  w.flavor = (u.flavor == GaugeFlavor::Complexified || v.flavor == GaugeFlavor::Complexified)
                 ? GaugeFlavor::Complexified
                 : GaugeFlavor::Unitary;
  w.samples.resize(u.samples.size());
  for (size_t k = 0; k < u.samples.size(); ++k) w.samples[k] = u.samples[k] * v.samples[k];
  if (u.slope || v.slope) {
    CMatrix s = CMatrix::Zero(u.samples[0].rows(), u.samples[0].cols());
    if (u.slope) s += *u.slope;
    if (v.slope) s += *v.slope;
    w.slope = std::move(s);  // slopes in Z(c) commute
  }
  return w;
}

namespace {

void require_invertible(const CMatrix& g, const char* what) {
  Eigen::FullPivLU<CMatrix> lu(g);
  if (!lu.isInvertible())
    throw std::invalid_argument(std::string(what) + ": non-invertible sample");
}

std::vector<CMatrix> logarithmic_derivative(const Grid& grid,
                                            const std::vector<CMatrix>& u,
                                            bool skew_project) {
  auto du = path_derivative(grid, u);
  std::vector<CMatrix> out(u.size());
  for (size_t k = 0; k < u.size(); ++k) {
    CMatrix w = du[k] * u[k].inverse();
    if (skew_project) w = 0.5 * (w - w.adjoint());
    out[k] = std::move(w);
  }
  return out;
}

}  // namespace

NahmPath apply_gauge(const GaugePath& u, const NahmPath& t) {
  require_same_grid(u.grid, t.grid, "apply_gauge");
  if (u.flavor != GaugeFlavor::Unitary)
    throw std::invalid_argument("apply_gauge: unitary gauge paths only");
  for (const auto& g : u.samples) require_invertible(g, "apply_gauge");

  std::vector<CMatrix> w =
      u.omega ? *u.omega : logarithmic_derivative(u.grid, u.samples, true);

  NahmPath out;
  out.grid = t.grid;
  out.samples.resize(t.samples.size());
  for (size_t k = 0; k < t.samples.size(); ++k) {
    const CMatrix& g = u.samples[k];
    CMatrix ginv = g.adjoint();
    out.samples[k][0] = g * t.samples[k][0] * ginv - w[k];
    for (int i = 1; i < 4; ++i) out.samples[k][i] = g * t.samples[k][i] * ginv;
  }
  if (t.asym) {
    NahmAsymptotics a = *t.asym;
    if (u.slope) a.tau0 = a.tau0 - *u.slope;
    out.asym = std::move(a);
  }
  return out;
}

TangentVector apply_gauge(const GaugePath& u, const TangentVector& x) {
  require_same_grid(u.grid, x.grid, "apply_gauge");
  TangentVector out;
  out.grid = x.grid;
  out.samples.resize(x.samples.size());
  for (size_t k = 0; k < x.samples.size(); ++k) {
    const CMatrix& g = u.samples[k];
    CMatrix ginv = g.adjoint();
    for (int i = 0; i < 4; ++i) out.samples[k][i] = g * x.samples[k][i] * ginv;
  }
  out.asym = x.asym;
  return out;
}

TangentVector fundamental_vector_field(const GaugeAlgebraPath& xi, const NahmPath& t) {
  require_same_grid(xi.grid, t.grid, "fundamental_vector_field");
  auto dxi = path_derivative(xi.grid, xi.samples);

  TangentVector x;
  x.grid = t.grid;
  x.samples.resize(t.samples.size());
  for (size_t k = 0; k < t.samples.size(); ++k) {
    x.samples[k][0] = bracket(xi.samples[k], t.samples[k][0]) - dxi[k];
    for (int i = 1; i < 4; ++i)
      x.samples[k][i] = bracket(xi.samples[k], t.samples[k][i]);
  }
  if (t.asym) {
    const int n = t.dim();
    TangentAsymptotics a = zero_tangent_asym(n);
    if (xi.asym) {
      a.delta[0] = -xi.asym->slope;
      for (int i = 0; i < 3; ++i)
        a.eps[i + 1] = bracket(xi.asym->limit, t.asym->sigma.sigma[i]);
    }
    x.asym = std::move(a);
  }
  return x;
}

std::vector<CMatrix> integrate_transport(const Grid& grid, const std::vector<CMatrix>& a,
                                         OdeSide side, bool unitary_project,
                                         double* max_drift) {
  const int n = grid.size();
  const int dim = static_cast<int>(a[0].rows());
  const CMatrix id = CMatrix::Identity(dim, dim);

  auto coeff = [&](double t) { return interpolate(grid, a, t); };
  auto rhs = [&](const CMatrix& c, const CMatrix& u) -> CMatrix {
    return side == OdeSide::Right ? CMatrix(u * c) : CMatrix(c * u);
  };

  std::vector<CMatrix> u(n);
  u[0] = id;
  double drift = 0;
  for (int k = 0; k + 1 < n; ++k) {
    const double t = grid.nodes[k];
    const double h = grid.nodes[k + 1] - t;
    const CMatrix c0 = a[k];
    const CMatrix cm = coeff(t + 0.5 * h);
    const CMatrix c1 = a[k + 1];

    CMatrix k1 = rhs(c0, u[k]);
    CMatrix k2 = rhs(cm, u[k] + 0.5 * h * k1);
    CMatrix k3 = rhs(cm, u[k] + 0.5 * h * k2);
    CMatrix k4 = rhs(c1, u[k] + h * k3);
    u[k + 1] = u[k] + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (unitary_project && ((k + 1) % 64 == 0 || k + 2 == n)) {
      CMatrix& g = u[k + 1];
      drift = std::max(drift, (g * g.adjoint() - id).cwiseAbs().maxCoeff());
      Eigen::JacobiSVD<CMatrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
      g = svd.matrixU() * svd.matrixV().adjoint();
    }
  }
  if (max_drift) *max_drift = drift;
  return u;
}

TemporalGaugeResult gauge_t0_to_zero(const NahmPath& t) {
  const int n = t.grid.size();
  std::vector<CMatrix> t0(n);
  for (int k = 0; k < n; ++k) t0[k] = t.samples[k][0];

  TemporalGaugeResult res;
  res.u.grid = t.grid;
  res.u.flavor = GaugeFlavor::Unitary;
  res.u.samples = integrate_transport(t.grid, t0, OdeSide::Right, true,
                                      &res.max_unitary_drift);
  res.drift_warning = res.max_unitary_drift > 1e-6;
  res.path = apply_gauge(res.u, t);
  if (res.path.asym) res.path.asym->tau0.setZero();
  return res;
}

std::pair<GaugePath, NahmPath> center_tau0(const NahmPath& t, double b, double c) {
  if (!t.asym)
    throw std::invalid_argument("center_tau0: missing asymptotics record");
  if (c <= 0) throw std::invalid_argument("center_tau0: c must be positive");
  const CMatrix tau0 = t.asym->tau0;

  GaugePath u;
  u.grid = t.grid;
  u.flavor = GaugeFlavor::Unitary;
  u.samples.resize(t.grid.size());
  u.omega = std::vector<CMatrix>(t.grid.size());
  for (int k = 0; k < t.grid.size(); ++k) {
    double s = t.grid.nodes[k];
    double f = s - b + b * std::exp(-c * s);
    u.samples[k] = exp_su(f * tau0);
    // the generator is a scalar multiple of a fixed matrix, so the
    // logarithmic derivative is just f'(t) tau0
    (*u.omega)[k] = (1.0 - c * b * std::exp(-c * s)) * tau0;
  }
  u.slope = tau0;
  return {u, apply_gauge(u, t)};
}

KronheimerData kronheimer_map(const NahmPath& t) {
  if (t.grid.is_half_line() || std::abs(t.grid.t_max() - 1.0) > 1e-12)
    throw std::invalid_argument("kronheimer_map: needs an interval grid on [0,1]");
  KronheimerData out;
  out.residual_sup = nahm_residual_sup(t);
  out.residual_warning = out.residual_sup > 1e-6;

  const int n = t.grid.size();
  std::vector<CMatrix> alpha(n);
  for (int k = 0; k < n; ++k)
    alpha[k] = t.samples[k][0] - Complex(0, 1) * t.samples[k][1];
  auto g = integrate_transport(t.grid, alpha, OdeSide::Right, false, nullptr);
  for (const auto& gk : g)
    if (gk.cwiseAbs().maxCoeff() > 1e8)
      throw BlowUpError("kronheimer_map: gauge flow blew up");

  out.g_end = g.back();
  out.beta0 = t.samples[0][2] + Complex(0, 1) * t.samples[0][3];
  return out;
}

ComplexPair apply_complex_gauge(const GaugePath& g, const std::vector<CMatrix>& alpha,
                                const std::vector<CMatrix>& beta) {
  if (g.samples.size() != alpha.size() || alpha.size() != beta.size())
    throw std::invalid_argument("apply_complex_gauge: grid mismatch");
  for (const auto& gk : g.samples) require_invertible(gk, "apply_complex_gauge");

  auto w = logarithmic_derivative(g.grid, g.samples, false);
  ComplexPair out;
  out.first.resize(alpha.size());
  out.second.resize(beta.size());
  for (size_t k = 0; k < alpha.size(); ++k) {
    CMatrix ginv = g.samples[k].inverse();
    out.first[k] = g.samples[k] * alpha[k] * ginv - w[k];
    out.second[k] = g.samples[k] * beta[k] * ginv;
  }
  return out;
}

double complex_equation_residual_sup(const Grid& grid,
                                     const std::vector<CMatrix>& alpha,
                                     const std::vector<CMatrix>& beta) {
  auto dbeta = path_derivative(grid, beta);
  double sup = 0;
  for (size_t k = 0; k < beta.size(); ++k) {
    CMatrix r = dbeta[k] - bracket(beta[k], alpha[k]);
    sup = std::max(sup, r.cwiseAbs().maxCoeff());
  }
  return sup;
}

ComplexPair model_complex_pair(const std::array<CMatrix, 3>& tau,
                               const Su2Triple& sigma, const Grid& grid) {
  ComplexPair out;
  const int n = grid.size();
  out.first.resize(n);
  out.second.resize(n);
  const Complex i(0, 1);
  for (int k = 0; k < n; ++k) {
    double c = 1.0 / (2.0 * (grid.nodes[k] + 1.0));
    out.first[k] = -i * (tau[0] + c * sigma.sigma[0]);
    out.second[k] = tau[1] + i * tau[2] + c * (sigma.sigma[1] + i * sigma.sigma[2]);
  }
  return out;
}

ComplexOrbitCoordinates complex_orbit_coordinates(const GaugePath& g,
                                                  const std::array<CMatrix, 3>& tau,
                                                  const Su2Triple& sigma) {
  ComplexOrbitCoordinates out;
  out.g0 = g.samples.front();
  out.tau_c_plus_y =
      tau[1] + Complex(0, 1) * tau[2] +
      0.5 * (sigma.sigma[1] + Complex(0, 1) * sigma.sigma[2]);
  return out;
}

PolarFactors polar_decompose(const CMatrix& g) {
  if (std::abs(g.determinant() - Complex(1, 0)) > 1e-6)
    throw std::invalid_argument("polar_decompose: determinant must be 1");
  Eigen::JacobiSVD<CMatrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues().minCoeff() < 1e-12)
    throw std::invalid_argument("polar_decompose: singular input");

  PolarFactors out;
  out.k = svd.matrixU() * svd.matrixV().adjoint();
  Eigen::VectorXd logs = svd.singularValues().array().log();
  CMatrix h = svd.matrixV() * logs.asDiagonal() * svd.matrixV().adjoint();
  out.xi = Complex(0, -1) * h;  // i xi = h Hermitian
  return out;
}

}  // namespace nahmlab
