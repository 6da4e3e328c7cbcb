#include "nahmlab/implosion.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nahmlab {

std::vector<CMatrix> baby_residual(const Grid& grid, const std::vector<CMatrix>& t0,
                                   const std::vector<CMatrix>& t1) {
  if (t0.size() != t1.size() || static_cast<int>(t0.size()) != grid.size())
    throw std::invalid_argument("baby_residual: grid mismatch");
  auto dt1 = path_derivative(grid, t1);
  std::vector<CMatrix> out(t1.size());
  for (size_t k = 0; k < t1.size(); ++k)
    out[k] = dt1[k] + bracket(t0[k], t1[k]);
  return out;
}

double baby_residual_sup(const Grid& grid, const std::vector<CMatrix>& t0,
                         const std::vector<CMatrix>& t1) {
  return sup_norm(baby_residual(grid, t0, t1));
}

std::pair<CMatrix, CMatrix> baby_phi_interval(const Grid& grid,
                                              const std::vector<CMatrix>& t0,
                                              const std::vector<CMatrix>& t1) {
  if (grid.is_half_line())
    throw std::invalid_argument("baby_phi_interval: interval grids only");
  double res = baby_residual_sup(grid, t0, t1);
  if (res > 1e-6)
    throw std::invalid_argument("baby_phi_interval: moment-map residual too large (" +
                                std::to_string(res) + ")");
  auto u = integrate_transport(grid, t0, OdeSide::Right, true, nullptr);
  return {u.back(), t1.front()};
}

WeylFace weyl_face(const CMatrix& tau1_raw) {
  const int n = static_cast<int>(tau1_raw.rows());
  require_su(tau1_raw, "weyl_face");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && std::abs(tau1_raw(i, j)) > 1e-12)
        throw std::invalid_argument("weyl_face: input must be diagonal");

  WeylFace f;
  f.permutation.resize(n);
  std::iota(f.permutation.begin(), f.permutation.end(), 0);
  std::stable_sort(f.permutation.begin(), f.permutation.end(), [&](int a, int b) {
    return tau1_raw(a, a).imag() > tau1_raw(b, b).imag();
  });
  f.tau1 = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) f.tau1(i, i) = tau1_raw(f.permutation[i], f.permutation[i]);

  CMatrix zero = CMatrix::Zero(n, n);
  f.stratum = centralizer_blocks({f.tau1, zero, zero});
  f.blocks = f.stratum.blocks;
  return f;
}

HalfLinePoint baby_phi_halfline(const Grid& grid, const std::vector<CMatrix>& t0,
                                const std::vector<CMatrix>& t1, const WeylFace& face) {
  if (!grid.is_half_line())
    throw std::invalid_argument("baby_phi_halfline: half-line grids only");
  double res = baby_residual_sup(grid, t0, t1);
  if (res > 1e-6)
    throw std::invalid_argument("baby_phi_halfline: moment-map residual too large");
  if (sup_norm({t0.back()}) > 1e-6)
    throw std::invalid_argument("baby_phi_halfline: T0 limit not normalized to zero");
  double scale = 1.0 + sup_norm(t1);
  if ((t1.back() - face.tau1).cwiseAbs().maxCoeff() > 1e-6 * scale)
    throw std::invalid_argument("baby_phi_halfline: limit outside the declared face");

  // (T0, T1) = u0.(0, tau1) with u0 = u u(inf)^-1 and du/dt = -T0 u, u(0)=1;
  // the group coordinate is u0(0) = u(inf)^-1.
  std::vector<CMatrix> minus_t0(t0.size());
  for (size_t k = 0; k < t0.size(); ++k) minus_t0[k] = -t0[k];
  auto u = integrate_transport(grid, minus_t0, OdeSide::Left, true, nullptr);

  HalfLinePoint p;
  p.k = u.back().adjoint();
  p.tau1 = face.tau1;
  return p;
}

bool phi_points_equivalent(const WeylFace& face, const CMatrix& k1, const CMatrix& k2,
                           double tol) {
  const int n = static_cast<int>(k1.rows());
  CMatrix c = k1.adjoint() * k2;

  // nearest per-block special unitary
  CMatrix proj = CMatrix::Zero(n, n);
  int off = 0;
  for (int kb : face.blocks) {
    CMatrix blk = c.block(off, off, kb, kb);
    Eigen::JacobiSVD<CMatrix> svd(blk, Eigen::ComputeFullU | Eigen::ComputeFullV);
    CMatrix u = svd.matrixU() * svd.matrixV().adjoint();
    Complex det = u.determinant();
    u *= std::exp(Complex(0, -std::arg(det) / double(kb)));
    proj.block(off, off, kb, kb) = u;
    off += kb;
  }
  return (k2 - k1 * proj).cwiseAbs().maxCoeff() <= tol;
}

// --- closed-form tangents ----------------------------------------------------

ImplosionTangent make_implosion_tangent(const WeylFace& face, const CMatrix& delta1,
                                        const CMatrix& slope,
                                        const std::vector<Eigen::Vector2d>& root_coeffs,
                                        double b) {
  if (!face.stratum.in_center(delta1) || !face.stratum.in_center(slope))
    throw std::invalid_argument("implosion tangent: delta1 and slope must lie in Z(c)");
  auto roots = root_spaces(face.tau1, face.stratum);
  if (root_coeffs.size() != roots.size())
    throw std::invalid_argument("implosion tangent: one coefficient pair per root space");
  return ImplosionTangent{face, delta1, slope, root_coeffs, b};
}

std::vector<CMatrix> baby_tangent_generator(const ImplosionTangent& tg, const Grid& grid) {
  auto roots = root_spaces(tg.face.tau1, tg.face.stratum);
  const int n = tg.face.stratum.n;
  std::vector<CMatrix> xi(grid.size(), CMatrix::Zero(n, n));
  for (int k = 0; k < grid.size(); ++k) {
    double t = grid.nodes[k];
    xi[k] = (t - tg.b) * tg.slope;
    for (size_t a = 0; a < roots.size(); ++a) {
      double damp = std::exp(-roots[a].alpha_value * t);
      xi[k] += damp * (tg.root_coeffs[a][0] * roots[a].basis[0] +
                       tg.root_coeffs[a][1] * roots[a].basis[1]);
    }
  }
  return xi;
}

BabyTangentSamples baby_tangent_samples(const ImplosionTangent& tg, const Grid& grid) {
  auto roots = root_spaces(tg.face.tau1, tg.face.stratum);
  if (tg.root_coeffs.size() != roots.size())
    throw std::invalid_argument("baby_tangent_samples: inconsistent coefficient count");
  const int n = tg.face.stratum.n;

  BabyTangentSamples out;
  out.grid = grid;
  out.x0.assign(grid.size(), CMatrix::Zero(n, n));
  out.x1.assign(grid.size(), CMatrix::Zero(n, n));
  out.delta0 = -tg.slope;
  out.delta1 = tg.delta1;

  for (int k = 0; k < grid.size(); ++k) {
    double t = grid.nodes[k];
    CMatrix x0 = -tg.slope;
    CMatrix x1 = tg.delta1;
    for (size_t a = 0; a < roots.size(); ++a) {
      const auto& rs = roots[a];
      double damp = rs.alpha_value * std::exp(-rs.alpha_value * t);
      CMatrix xa = tg.root_coeffs[a][0] * rs.basis[0] + tg.root_coeffs[a][1] * rs.basis[1];
      Eigen::Vector2d ic = rs.i0 * Eigen::Vector2d(tg.root_coeffs[a][0], tg.root_coeffs[a][1]);
      CMatrix i0xa = ic[0] * rs.basis[0] + ic[1] * rs.basis[1];
      x0 += damp * xa;       // -dxi/dt
      x1 -= damp * i0xa;     // [xi_alpha, tau1] = -alpha I0 xi_alpha
    }
    out.x0[k] = std::move(x0);
    out.x1[k] = std::move(x1);
  }
  return out;
}

double implosion_tangent_norm2(const ImplosionTangent& tg) {
  auto roots = root_spaces(tg.face.tau1, tg.face.stratum);
  double v = tg.b * (inner(tg.delta1, tg.delta1) + inner(tg.slope, tg.slope));
  for (size_t a = 0; a < roots.size(); ++a)
    v += roots[a].alpha_value * tg.root_coeffs[a].squaredNorm();
  return v;
}

// --- closed-form geometry ------------------------------------------------------

BabyGeometry::BabyGeometry(const WeylFace& face, double b) : face_(face), b_(b) {
  if (b <= 0)
    throw std::invalid_argument("baby_geometry: b must be positive");
  roots_ = root_spaces(face.tau1, face.stratum);
}

void BabyGeometry::validate(const FaceTangent& x) const {
  if (!face_.stratum.in_center(x.v) || !face_.stratum.in_center(x.w))
    throw std::invalid_argument("face tangent: v, w must lie in Z(c)");
  if ((x.vperp - project_offblock(x.vperp, face_.stratum)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("face tangent: vperp must lie in c_perp");
}

std::vector<Eigen::Vector2d> BabyGeometry::decompose_offblock(const CMatrix& vperp) const {
  std::vector<Eigen::Vector2d> out(roots_.size());
  for (size_t a = 0; a < roots_.size(); ++a)
    out[a] = Eigen::Vector2d(inner(roots_[a].basis[0], vperp),
                             inner(roots_[a].basis[1], vperp));
  return out;
}

CMatrix BabyGeometry::apply_i0(const CMatrix& vperp) const {
  CMatrix out = CMatrix::Zero(vperp.rows(), vperp.cols());
  auto coords = decompose_offblock(vperp);
  for (size_t a = 0; a < roots_.size(); ++a) {
    Eigen::Vector2d c = roots_[a].i0 * coords[a];
    out += c[0] * roots_[a].basis[0] + c[1] * roots_[a].basis[1];
  }
  return out;
}

double BabyGeometry::metric(const FaceTangent& x, const FaceTangent& y) const {
  double v = b_ * inner(x.w, y.w) + (1.0 / b_) * inner(x.v, y.v);
  auto cx = decompose_offblock(x.vperp);
  auto cy = decompose_offblock(y.vperp);
  for (size_t a = 0; a < roots_.size(); ++a)
    v += roots_[a].alpha_value * cx[a].dot(cy[a]);
  return v;
}

FaceTangent BabyGeometry::complex_structure(const FaceTangent& x) const {
  FaceTangent out;
  out.v = -b_ * x.w;
  out.vperp = apply_i0(x.vperp);
  out.w = x.v / b_;
  return out;
}

double BabyGeometry::symplectic(const FaceTangent& x, const FaceTangent& y) const {
  return inner(x.v, y.w) - inner(x.w, y.v) +
         inner(face_.tau1, bracket(x.vperp, y.vperp));
}

}  // namespace nahmlab
