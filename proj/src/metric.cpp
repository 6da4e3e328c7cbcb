#include "nahmlab/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace nahmlab {

namespace {

double resolve_tail_start(const Grid& g, const MetricConfig& cfg) {
  double ts = cfg.tail_start < 0 ? 0.5 * g.t_max() : cfg.tail_start;
  if (ts >= g.t_max())
    throw std::invalid_argument("bielawski_pair: tail_start beyond the grid");
  return ts;
}

// Core of the pairing over an arbitrary component count. deltas/eps are per
// component; pole_offset places the tail pole at t = -pole_offset relative to
// the grid coordinate (0 for a native half-line, -1 for data glued after a
// unit interval, where the model tail is eps / (2 t)).
struct Components {
  const Grid* grid;
  std::vector<const std::vector<CMatrix>*> comps;
  std::vector<const CMatrix*> delta;
  std::vector<const CMatrix*> eps;
};

PairingReport pair_core(const Components& x, const Components& y,
                        const MetricConfig& cfg, double pole_offset) {
  const Grid& g = *x.grid;
  const size_t nc = x.comps.size();
  PairingReport rep;

  if (!g.is_half_line()) {
    // plain L^2 on intervals
    std::vector<double> dens(g.size(), 0.0);
    for (size_t c = 0; c < nc; ++c)
      for (int k = 0; k < g.size(); ++k)
        dens[k] += inner((*x.comps[c])[k], (*y.comps[c])[k]);
    rep.interval_part = trapezoid(g, dens);
    rep.value = rep.interval_part;
    return rep;
  }

  double scale = 0;
  for (size_t c = 0; c < nc; ++c) {
    scale = std::max(scale, ip_norm(*x.delta[c]) + ip_norm(*x.eps[c]));
    scale = std::max(scale, ip_norm(*y.delta[c]) + ip_norm(*y.eps[c]));
  }
  for (size_t c = 0; c < nc; ++c) {
    double cross = std::max(std::abs(inner(*x.delta[c], *y.eps[c])),
                            std::abs(inner(*y.delta[c], *x.eps[c])));
    cross = std::max({cross, std::abs(inner(*x.delta[c], *x.eps[c])),
                      std::abs(inner(*y.delta[c], *y.eps[c]))});
    if (cross > 1e-8 * std::max(1.0, scale * scale))
      throw std::invalid_argument(
          "bielawski_pair: <delta, eps> != 0, the regularized integral diverges");
  }

  double limit_density = 0;
  for (size_t c = 0; c < nc; ++c) {
    rep.boundary_part += cfg.b * inner(*x.delta[c], *y.delta[c]);
    limit_density += inner(*x.delta[c], *y.delta[c]);
  }

  std::vector<double> dens(g.size());
  for (int k = 0; k < g.size(); ++k) {
    double v = 0;
    for (size_t c = 0; c < nc; ++c) v += inner((*x.comps[c])[k], (*y.comps[c])[k]);
    dens[k] = v - limit_density;
  }

  const double ts = resolve_tail_start(g, cfg);
  if (!cfg.analytic_tail) {
    rep.interval_part = trapezoid(g, dens);
    rep.value = rep.boundary_part + rep.interval_part;
    return rep;
  }

  rep.interval_part = trapezoid_until(g, dens, ts);

  double eps_density = 0;
  for (size_t c = 0; c < nc; ++c) eps_density += inner(*x.eps[c], *y.eps[c]);
  rep.tail_part = eps_density / (4.0 * (1.0 + pole_offset + ts));

  // Bound the neglected remainder from the measured deviation of the sampled
  // density from the tail model on [ts, t_max], assuming it keeps decaying at
  // least like (1+t)^(-3/2).
  const double kZeta0 = 0.5;
  double coef = 0;
  for (int k = 0; k < g.size(); ++k) {
    double t = g.nodes[k];
    if (t < ts) continue;
    double pole = 1.0 + pole_offset + t;
    double dev = std::abs(dens[k] - eps_density / (4.0 * pole * pole));
    coef = std::max(coef, dev * std::pow(1.0 + t, 1.0 + kZeta0));
  }
  rep.tail_remainder_bound = coef / (kZeta0 * std::pow(1.0 + ts, kZeta0));

  rep.value = rep.boundary_part + rep.interval_part + rep.tail_part;
  return rep;
}

std::array<std::vector<CMatrix>, 4> split_components(
    const std::vector<Quadruple>& samples) {
  std::array<std::vector<CMatrix>, 4> out;
  for (auto& v : out) v.reserve(samples.size());
  for (const auto& q : samples)
    for (int i = 0; i < 4; ++i) out[i].push_back(q[i]);
  return out;
}

}  // namespace

PairingReport bielawski_pair(const TangentVector& x, const TangentVector& y,
                             const MetricConfig& cfg) {
  require_same_grid(x.grid, y.grid, "bielawski_pair");
  const bool half = x.grid.is_half_line();
  if (half && (!x.asym || !y.asym))
    throw std::invalid_argument("bielawski_pair: half-line input without asymptotics");

  auto xc = split_components(x.samples);
  auto yc = split_components(y.samples);
  const int n = static_cast<int>(x.samples[0][0].rows());
  const CMatrix zero = CMatrix::Zero(n, n);

  Components cx, cy;
  cx.grid = cy.grid = &x.grid;
  for (int i = 0; i < 4; ++i) {
    cx.comps.push_back(&xc[i]);
    cy.comps.push_back(&yc[i]);
    cx.delta.push_back(half ? &x.asym->delta[i] : &zero);
    cy.delta.push_back(half ? &y.asym->delta[i] : &zero);
    cx.eps.push_back(half ? &x.asym->eps[i] : &zero);
    cy.eps.push_back(half ? &y.asym->eps[i] : &zero);
  }
  return pair_core(cx, cy, cfg, 0.0);
}

PairingReport bielawski_pair2(const Grid& grid, const std::vector<CMatrix>& x0,
                              const std::vector<CMatrix>& x1, const CMatrix& delta0_x,
                              const CMatrix& delta1_x, const std::vector<CMatrix>& y0,
                              const std::vector<CMatrix>& y1, const CMatrix& delta0_y,
                              const CMatrix& delta1_y, const MetricConfig& cfg) {
  const CMatrix zero = CMatrix::Zero(delta0_x.rows(), delta0_x.cols());
  Components cx, cy;
  cx.grid = cy.grid = &grid;
  cx.comps = {&x0, &x1};
  cy.comps = {&y0, &y1};
  cx.delta = {&delta0_x, &delta1_x};
  cy.delta = {&delta0_y, &delta1_y};
  cx.eps = {&zero, &zero};
  cy.eps = {&zero, &zero};
  return pair_core(cx, cy, cfg, 0.0);
}

TangentVector quaternion_act(Axis axis, const TangentVector& x) {
  // right multiplication by -i, j, k on X0 + X1 i + X2 j + X3 k
  static const int perm[3][4] = {{1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const double sign[3][4] = {
      {1, -1, -1, 1}, {-1, -1, 1, 1}, {-1, 1, -1, 1}};
  const int a = axis == Axis::I ? 0 : axis == Axis::J ? 1 : 2;

  TangentVector out;
  out.grid = x.grid;
  out.samples.resize(x.samples.size());
  for (size_t k = 0; k < x.samples.size(); ++k)
    for (int i = 0; i < 4; ++i)
      out.samples[k][i] = sign[a][i] * x.samples[k][perm[a][i]];
  if (x.asym) {
    TangentAsymptotics t;
    for (int i = 0; i < 4; ++i) {
      t.delta[i] = sign[a][i] * x.asym->delta[perm[a][i]];
      t.eps[i] = sign[a][i] * x.asym->eps[perm[a][i]];
    }
    out.asym = std::move(t);
  }
  return out;
}

double symplectic_pair(Axis axis, const TangentVector& x, const TangentVector& y,
                       const MetricConfig& cfg) {
  return bielawski_pair(quaternion_act(axis, x), y, cfg).value;
}

std::array<CMatrix, 3> moment_torus(const NahmPath& t) {
  if (!t.asym)
    throw std::invalid_argument("moment_torus: missing asymptotics record");
  return t.asym->tau;
}

std::array<CMatrix, 3> moment_boundary(const NahmPath& t) {
  return {-t.samples.front()[1], -t.samples.front()[2], -t.samples.front()[3]};
}

// --- gluing ---------------------------------------------------------------

namespace {

Grid glue_grids(const Grid& interval, const Grid& half) {
  Grid g;
  g.kind = Grid::Kind::HalfLine;
  g.nodes = interval.nodes;
  for (size_t k = 1; k < half.nodes.size(); ++k)
    g.nodes.push_back(interval.t_max() + half.nodes[k]);
  return g;
}

void require_gluable(const Grid& gi, const Grid& gh, const char* what) {
  if (gi.is_half_line() || std::abs(gi.t_max() - 1.0) > 1e-12)
    throw std::invalid_argument(std::string(what) + ": interval factor must live on [0,1]");
  if (!gh.is_half_line())
    throw std::invalid_argument(std::string(what) + ": second factor must be a half-line path");
}

}  // namespace

double concat_pair_value(const TangentVector& x_interval,
                         const TangentVector& x_halfline,
                         const TangentVector& y_interval,
                         const TangentVector& y_halfline, const MetricConfig& cfg) {
  require_gluable(x_interval.grid, x_halfline.grid, "concat_pair_value");
  if (!x_halfline.asym || !y_halfline.asym)
    throw std::invalid_argument("concat_pair_value: half-line tangents need asymptotics");
  for (int i = 0; i < 4; ++i) {
    double gap = std::max(
        (x_interval.samples.back()[i] - x_halfline.samples.front()[i]).cwiseAbs().maxCoeff(),
        (y_interval.samples.back()[i] - y_halfline.samples.front()[i]).cwiseAbs().maxCoeff());
    if (gap > 1e-8)
      throw std::invalid_argument("concat_pair_value: tangent junction mismatch");
  }

  Grid glued = glue_grids(x_interval.grid, x_halfline.grid);
  auto concat = [&](const TangentVector& a, const TangentVector& b) {
    std::vector<Quadruple> s = a.samples;
    s.insert(s.end(), b.samples.begin() + 1, b.samples.end());
    return s;
  };
  auto xs = concat(x_interval, x_halfline);
  auto ys = concat(y_interval, y_halfline);

  std::array<std::vector<CMatrix>, 4> xc = split_components(xs), yc = split_components(ys);
  Components cx, cy;
  cx.grid = cy.grid = &glued;
  for (int i = 0; i < 4; ++i) {
    cx.comps.push_back(&xc[i]);
    cy.comps.push_back(&yc[i]);
    cx.delta.push_back(&x_halfline.asym->delta[i]);
    cy.delta.push_back(&y_halfline.asym->delta[i]);
    cx.eps.push_back(&x_halfline.asym->eps[i]);
    cy.eps.push_back(&y_halfline.asym->eps[i]);
  }
  MetricConfig shifted = cfg;
  shifted.b = cfg.b + 1.0;
  if (shifted.tail_start < 0) shifted.tail_start = 0.5 * x_halfline.grid.t_max();
  shifted.tail_start += 1.0;  // same physical cut as the half-line factor
  // the half-line tail model keeps its pole one unit before the glued origin
  return pair_core(cx, cy, shifted, -1.0).value;
}

GlueResult glue_paths(const NahmPath& t_interval, const NahmPath& t_halfline,
                      const MetricConfig& cfg) {
  require_gluable(t_interval.grid, t_halfline.grid, "glue_paths");
  if (!t_halfline.asym)
    throw std::invalid_argument("glue_paths: half-line factor needs asymptotics");

  GlueReport rep;
  for (int i = 0; i < 4; ++i)
    rep.junction_gap = std::max(
        rep.junction_gap, (t_interval.samples.back()[i] - t_halfline.samples.front()[i])
                              .cwiseAbs()
                              .maxCoeff());
  if (rep.junction_gap > 1e-8)
    throw std::invalid_argument("glue_paths: junction samples disagree");

  auto t0_near = [&](const NahmPath& p, bool at_end) {
    double sup = 0;
    const double t_ref = at_end ? p.grid.t_max() : 0.0;
    for (int k = 0; k < p.grid.size(); ++k)
      if (std::abs(p.grid.nodes[k] - t_ref) < 0.25)
        sup = std::max(sup, p.samples[k][0].cwiseAbs().maxCoeff());
    return sup;
  };
  rep.t0_sup_near_junction = std::max(t0_near(t_interval, true), t0_near(t_halfline, false));
  if (rep.t0_sup_near_junction > 1e-8)
    throw std::invalid_argument(
        "glue_paths: T0 must vanish near the junction; gauge it away first");

  GlueResult out;
  out.glued.grid = glue_grids(t_interval.grid, t_halfline.grid);
  out.glued.samples = t_interval.samples;
  out.glued.samples.insert(out.glued.samples.end(), t_halfline.samples.begin() + 1,
                           t_halfline.samples.end());
  out.glued.asym = t_halfline.asym;

  // Deterministic matched check pair: a Z(c) limit with an eps tail plus an
  // exponentially damped off-block part on the half-line, ramped up from zero
  // across the interval.
  const Stratum& s = t_halfline.asym->stratum;
  const int n = t_halfline.dim();
  TangentAsymptotics asym = zero_tangent_asym(n);
  auto zb = center_basis(s);
  auto cb = commutator_basis(s);
  for (int i = 0; i < 4; ++i) {
    if (!zb.empty()) asym.delta[i] = zb[(i + 1) % zb.size()];
    if (i > 0 && !cb.empty()) asym.eps[i] = cb[i % cb.size()];
  }

  TangentVector xh;
  xh.grid = t_halfline.grid;
  xh.samples.resize(xh.grid.size());
  CMatrix rho = CMatrix::Zero(n, n);
  if (n >= 2 && s.blocks.size() > 1) {
    rho(0, n - 1) = Complex(0.3, 0.1);
    rho(n - 1, 0) = Complex(-0.3, 0.1);
  }
  for (int k = 0; k < xh.grid.size(); ++k) {
    double t = xh.grid.nodes[k];
    for (int i = 0; i < 4; ++i)
      xh.samples[k][i] = asym.delta[i] + asym.eps[i] / (2.0 * (1.0 + t)) +
                         std::exp(-t) * rho;
  }
  xh.asym = asym;

  TangentVector xi;
  xi.grid = t_interval.grid;
  xi.samples.resize(xi.grid.size());
  for (int k = 0; k < xi.grid.size(); ++k) {
    double r = xi.grid.nodes[k];
    double ramp = r * r * (3.0 - 2.0 * r);
    for (int i = 0; i < 4; ++i) xi.samples[k][i] = ramp * xh.samples[0][i];
  }

  rep.interval_l2 = bielawski_pair(xi, xi, cfg).value;
  rep.halfline_value = bielawski_pair(xh, xh, cfg).value;
  rep.concat_value = concat_pair_value(xi, xh, xi, xh, cfg);
  rep.mismatch = std::abs(rep.interval_l2 + rep.halfline_value - rep.concat_value);

  out.report = rep;
  return out;
}

}  // namespace nahmlab
