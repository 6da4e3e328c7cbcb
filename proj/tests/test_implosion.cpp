#include <doctest.h>

#include <cmath>

#include "nahmlab/implosion.hpp"
#include "nahmlab/sampling.hpp"

using namespace nahmlab;

namespace {

CMatrix diag_su(const std::vector<double>& d) {
  CMatrix m = CMatrix::Zero(d.size(), d.size());
  double mean = 0;
  for (double v : d) mean += v;
  mean /= double(d.size());
  for (size_t i = 0; i < d.size(); ++i) m(i, i) = Complex(0, d[i] - mean);
  return m;
}

// K-valued path from 1 to k along the logarithm
std::vector<CMatrix> geodesic_path(const Grid& g, const CMatrix& k) {
  CMatrix logk = unitary_log(k);
  std::vector<CMatrix> out(g.size());
  double span = g.nodes.back();
  for (int i = 0; i < g.size(); ++i)
    out[i] = exp_su((g.nodes[i] / span) * logk);
  return out;
}

}  // namespace

TEST_CASE("weyl_face") {
  WeylFace f2 = weyl_face(0.5 * diag_su({1.0, -1.0}));
  CHECK(f2.blocks == std::vector<int>{1, 1});

  WeylFace f3 = weyl_face(diag_su({1.0, -2.0, 1.0}));
  CHECK(f3.blocks == std::vector<int>{2, 1});
  CHECK(f3.tau1(0, 0).imag() >= f3.tau1(1, 1).imag());
  CHECK(f3.tau1(1, 1).imag() >= f3.tau1(2, 2).imag());
  CHECK(f3.permutation == std::vector<int>{0, 2, 1});

  WeylFace vertex = weyl_face(CMatrix::Zero(3, 3));
  CHECK(vertex.blocks == std::vector<int>{3});
}

TEST_CASE("baby_residual") {
  Grid grid = Grid::interval(1.0, 512);
  const int n = 2;
  CMatrix zero = CMatrix::Zero(n, n);
  Rng rng(63);
  CMatrix xi = rng.su(n);

  SUBCASE("constants solve the equation") {
    std::vector<CMatrix> t0(grid.size(), zero), t1(grid.size(), xi);
    CHECK(baby_residual_sup(grid, t0, t1) < 1e-12);
    std::vector<CMatrix> any_t0(grid.size());
    for (int k = 0; k < grid.size(); ++k) any_t0[k] = bump(grid.nodes[k], 0, 1) * xi;
    std::vector<CMatrix> zero_t1(grid.size(), zero);
    CHECK(baby_residual_sup(grid, any_t0, zero_t1) == 0.0);
  }

  SUBCASE("gauge transforms of solutions still solve") {
    Grid fine = Grid::interval(1.0, 2048);
    CMatrix dir = 0.25 * rng.su(n);
    std::vector<double> w(fine.size()), wd(fine.size());
    for (int k = 0; k < fine.size(); ++k) {
      w[k] = bump(fine.nodes[k], 0.1, 0.9);
      wd[k] = bump_derivative(fine.nodes[k], 0.1, 0.9);
    }
    GaugePath u = gauge_ray(fine, dir, w, wd);
    Grid grid = fine;

    // act on the pair via the quadruple machinery
    NahmPath packed;
    packed.grid = grid;
    packed.samples.assign(grid.size(), {zero, xi, zero, zero});
    NahmPath moved = apply_gauge(u, packed);
    std::vector<CMatrix> t0(grid.size()), t1(grid.size());
    for (int k = 0; k < grid.size(); ++k) {
      t0[k] = moved.samples[k][0];
      t1[k] = moved.samples[k][1];
    }
    CHECK(baby_residual_sup(grid, t0, t1) < 1e-8);
  }
}

TEST_CASE("baby_phi_interval") {
  Grid grid = Grid::interval(1.0, 1024);
  const int n = 2;
  CMatrix zero = CMatrix::Zero(n, n);
  Rng rng(67);

  SUBCASE("flat pairs map to (1, xi)") {
    CMatrix xi = rng.su(n);
    std::vector<CMatrix> t0(grid.size(), zero), t1(grid.size(), xi);
    auto [k, xi0] = baby_phi_interval(grid, t0, t1);
    CHECK((k - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((xi0 - xi).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("transported flat pairs recover (k, xi)") {
    CMatrix k_target = rng.unitary(n);
    CMatrix xi = rng.su(n);
    auto u0 = geodesic_path(grid, k_target);
    // (T0, T1) = u0^-1 . (0, xi)
    NahmPath flat;
    flat.grid = grid;
    flat.samples.assign(grid.size(), {zero, xi, zero, zero});
    GaugePath u_inv;
    u_inv.grid = grid;
    u_inv.flavor = GaugeFlavor::Unitary;
    u_inv.samples.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) u_inv.samples[i] = u0[i].adjoint();
    NahmPath moved = apply_gauge(u_inv, flat);
    std::vector<CMatrix> t0(grid.size()), t1(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
      t0[i] = moved.samples[i][0];
      t1[i] = moved.samples[i][1];
    }
    auto [k, xi0] = baby_phi_interval(grid, t0, t1);
    CHECK((k - k_target).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((xi0 - xi).cwiseAbs().maxCoeff() < 1e-10);

    // invariance under transformations fixing both endpoints
    GaugeAlgebraPath gen;
    gen.grid = grid;
    gen.samples.resize(grid.size());
    CMatrix dir = 0.4 * rng.su(n);
    for (int i = 0; i < grid.size(); ++i)
      gen.samples[i] = bump(grid.nodes[i], 0.05, 0.95) * dir;
    NahmPath moved2 = apply_gauge(gauge_exp(gen), moved);
    std::vector<CMatrix> s0(grid.size()), s1(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
      s0[i] = moved2.samples[i][0];
      s1[i] = moved2.samples[i][1];
    }
    auto [k2, xi2] = baby_phi_interval(grid, s0, s1);
    CHECK((k2 - k).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((xi2 - xi0).cwiseAbs().maxCoeff() < 1e-8);
  }

  SUBCASE("non-solutions are rejected") {
    Rng rng2(5);
    std::vector<CMatrix> t0(grid.size(), rng2.su(n)), t1(grid.size());
    for (int i = 0; i < grid.size(); ++i) t1[i] = grid.nodes[i] * rng2.su(n);
    CHECK_THROWS(baby_phi_interval(grid, t0, t1));
  }
}

TEST_CASE("baby_phi_halfline") {
  Grid grid = Grid::half_line(40.0, 4096);
  WeylFace face = weyl_face(diag_su({0.9, 0.9, -1.8}));
  const int n = 3;
  CMatrix zero = CMatrix::Zero(n, n);
  Rng rng(71);

  SUBCASE("constant model maps to (1, tau1)") {
    std::vector<CMatrix> t0(grid.size(), zero), t1(grid.size(), face.tau1);
    auto p = baby_phi_halfline(grid, t0, t1, face);
    CHECK((p.k - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((p.tau1 - face.tau1).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("transported model recovers the group coordinate") {
    CMatrix k_target = rng.unitary(n);
    CMatrix logk = unitary_log(k_target);
    // path from k at 0 to 1 at infinity, exponentially settling
    GaugePath p;
    p.grid = grid;
    p.flavor = GaugeFlavor::Unitary;
    p.samples.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i)
      p.samples[i] = exp_su(std::exp(-0.9 * grid.nodes[i]) * logk);
    NahmPath flat;
    flat.grid = grid;
    flat.samples.assign(grid.size(), {zero, face.tau1, zero, zero});
    NahmPath moved = apply_gauge(p, flat);
    std::vector<CMatrix> t0(grid.size()), t1(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
      t0[i] = moved.samples[i][0];
      t1[i] = moved.samples[i][1];
    }
    auto point = baby_phi_halfline(grid, t0, t1, face);
    CHECK((point.k - k_target).cwiseAbs().maxCoeff() < 1e-7);
  }

  SUBCASE("the block-special ambiguity is recognized") {
    CMatrix k1 = rng.unitary(n);
    // c in the commutator subgroup of the face centralizer: block SU(2) x SU(1)
    CMatrix cdir = CMatrix::Zero(n, n);
    cdir(0, 1) = Complex(0.7, 0.2);
    cdir(1, 0) = Complex(-0.7, 0.2);
    CMatrix c = exp_su(cdir);
    CHECK(phi_points_equivalent(face, k1, k1 * c));

    // but not a generic rotation
    CMatrix bad = CMatrix::Zero(n, n);
    bad(0, 2) = Complex(0.4, 0.0);
    bad(2, 0) = Complex(-0.4, 0.0);
    CHECK_FALSE(phi_points_equivalent(face, k1, k1 * exp_su(bad)));

    // nor a center twist of the block pair
    CMatrix zdir = 0.5 * center_basis(face.stratum).front();
    CHECK_FALSE(phi_points_equivalent(face, k1, k1 * exp_su(zdir)));
  }

  SUBCASE("limits outside the declared face are rejected") {
    std::vector<CMatrix> t0(grid.size(), zero),
        t1(grid.size(), 1.05 * face.tau1);
    CHECK_THROWS(baby_phi_halfline(grid, t0, t1, face));
  }
}

TEST_CASE("baby tangents") {
  Grid grid = Grid::half_line(40.0, 8192);

  SUBCASE("delta-only and slope-only degenerate cases") {
    WeylFace face = weyl_face(diag_su({0.7, -0.7}));
    auto zb = center_basis(face.stratum);
    auto roots = root_spaces(face.tau1, face.stratum);
    std::vector<Eigen::Vector2d> zero_coeffs(roots.size(), Eigen::Vector2d::Zero());

    auto tg = make_implosion_tangent(face, zb[0], CMatrix::Zero(2, 2), zero_coeffs, 1.0);
    auto s = baby_tangent_samples(tg, grid);
    CHECK(sup_norm(s.x0) == 0.0);
    for (int k = 0; k < grid.size(); k += 500)
      CHECK((s.x1[k] - zb[0]).cwiseAbs().maxCoeff() == 0.0);

    auto tg2 = make_implosion_tangent(face, CMatrix::Zero(2, 2), zb[0], zero_coeffs, 1.0);
    auto s2 = baby_tangent_samples(tg2, grid);
    CHECK(sup_norm(s2.x1) == 0.0);
    for (int k = 0; k < grid.size(); k += 500)
      CHECK((s2.x0[k] + zb[0]).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("root coefficients decay at their own rate") {
    double theta = 0.7;
    WeylFace face = weyl_face(diag_su({theta, -theta}));
    auto roots = root_spaces(face.tau1, face.stratum);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].alpha_value == doctest::Approx(2 * theta));
    auto tg = make_implosion_tangent(face, CMatrix::Zero(2, 2), CMatrix::Zero(2, 2),
                                     {Eigen::Vector2d(1.0, -0.5)}, 1.0);
    auto s = baby_tangent_samples(tg, grid);
    auto rep = decay_diagnostics(grid, s.x1, face.stratum);
    CHECK(std::abs(rep.eta_fit - 2 * theta) < 0.02);
  }

  SUBCASE("generator solves its second-order equation; samples solve the linearization") {
    Rng rng(73);
    WeylFace face = weyl_face(diag_su({1.1, 0.2, -1.3}));
    auto zb = center_basis(face.stratum);
    auto roots = root_spaces(face.tau1, face.stratum);
    std::vector<Eigen::Vector2d> coeffs(roots.size());
    for (auto& c : coeffs) c = 0.5 * Eigen::Vector2d(rng.normal(), rng.normal());
    auto tg = make_implosion_tangent(face, CMatrix(0.5 * rng.in_span(zb)),
                                     CMatrix(0.5 * rng.in_span(zb)), coeffs, 0.8);

    // second differences sit on an eps/h^2 roundoff floor; sample the
    // defining equation on a grid coarse enough to stay above it
    Grid coarse = Grid::half_line(40.0, 2048);
    auto xi = baby_tangent_generator(tg, coarse);
    auto ddxi = path_second_derivative(coarse, xi);
    double worst = 0;
    for (int k = 0; k < coarse.size(); ++k) {
      CMatrix r = ddxi[k] + bracket(face.tau1, bracket(face.tau1, xi[k]));
      worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-9);

    auto s = baby_tangent_samples(tg, grid);
    auto dx0 = path_derivative(grid, s.x0);
    auto dx1 = path_derivative(grid, s.x1);
    double lin = 0;
    for (int k = 0; k < grid.size(); ++k) {
      lin = std::max(lin,
                     (dx0[k] + bracket(face.tau1, s.x1[k])).cwiseAbs().maxCoeff());
      lin = std::max(lin,
                     (dx1[k] + bracket(s.x0[k], face.tau1)).cwiseAbs().maxCoeff());
    }
    CHECK(lin < 1e-9);
  }

  SUBCASE("coefficient count is enforced") {
    WeylFace face = weyl_face(diag_su({0.7, -0.7}));
    CHECK_THROWS(make_implosion_tangent(face, CMatrix::Zero(2, 2), CMatrix::Zero(2, 2),
                                        {}, 1.0));
  }
}

TEST_CASE("baby geometry evaluators") {
  WeylFace face = weyl_face(diag_su({1.0, 0.2, -1.2}));
  Rng rng(79);
  auto zb = center_basis(face.stratum);

  SUBCASE("complex structure squares to minus one, exactly") {
    BabyGeometry geom(face, 2.0);
    FaceTangent x{rng.in_span(zb), project_offblock(rng.su(3), face.stratum),
                  rng.in_span(zb)};
    FaceTangent xx = geom.complex_structure(geom.complex_structure(x));
    CHECK((xx.v + x.v).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((xx.vperp + x.vperp).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((xx.w + x.w).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("metric positivity and b > 0 requirement") {
    BabyGeometry geom(face, 0.5);
    for (int rep = 0; rep < 200; ++rep) {
      FaceTangent x{rng.in_span(zb), project_offblock(rng.su(3), face.stratum),
                    rng.in_span(zb)};
      CHECK(geom.metric(x, x) > 0);
    }
    CHECK_THROWS(BabyGeometry(face, 0.0));
    CHECK_THROWS(BabyGeometry(face, -1.0));
  }

  SUBCASE("compatibility and the ambient coadjoint form") {
    for (double b : {0.5, 1.0, 2.0}) {
      BabyGeometry geom(face, b);
      for (int rep = 0; rep < 25; ++rep) {
        FaceTangent x{rng.in_span(zb), project_offblock(rng.su(3), face.stratum),
                      rng.in_span(zb)};
        FaceTangent y{rng.in_span(zb), project_offblock(rng.su(3), face.stratum),
                      rng.in_span(zb)};
        double direct = geom.symplectic(x, y);
        double via = geom.metric(geom.complex_structure(x), y);
        CHECK(std::abs(direct - via) < 1e-10);
        CHECK(std::abs(geom.symplectic(x, x)) < 1e-12);
      }
    }
  }

  SUBCASE("closed-form norm against the regularized integral") {
    Grid grid = Grid::half_line(40.0, 8192);
    MetricConfig cfg;
    cfg.b = 1.0;
    for (double theta : {0.3, 0.7, 1.2}) {
      WeylFace f2 = weyl_face(diag_su({theta, -theta}));
      auto zb2 = center_basis(f2.stratum);
      auto roots = root_spaces(f2.tau1, f2.stratum);
      std::vector<Eigen::Vector2d> coeffs(roots.size());
      for (auto& c : coeffs) c = Eigen::Vector2d(rng.normal(), rng.normal());
      auto tg = make_implosion_tangent(f2, rng.in_span(zb2), rng.in_span(zb2), coeffs,
                                       cfg.b);
      double closed = implosion_tangent_norm2(tg);
      auto s = baby_tangent_samples(tg, grid);
      double integrated =
          bielawski_pair2(grid, s.x0, s.x1, s.delta0, s.delta1, s.x0, s.x1, s.delta0,
                          s.delta1, cfg)
              .value;
      CHECK(std::abs(integrated - closed) < 1e-5 * std::abs(closed));
    }
  }
}

TEST_CASE("interval symplectic pullback at the base point") {
  // derivative of the inverse identification at (1, 0) pairs to the standard
  // cotangent form <psi2, xi1> - <psi1, xi2>
  Grid grid = Grid::interval(1.0, 2048);
  const int n = 2;
  Rng rng(83);
  CMatrix psi1 = rng.su(n), psi2 = rng.su(n), xi1 = rng.su(n), xi2 = rng.su(n);

  auto inverse_point = [&](double theta, const CMatrix& a, const CMatrix& bb) {
    // Psi(exp(theta a), theta b) = u^-1.(0, theta b), u(t) = exp(t theta a)
    std::vector<CMatrix> t0(grid.size()), t1(grid.size());
    for (int k = 0; k < grid.size(); ++k) {
      double t = grid.nodes[k];
      CMatrix u_inv = exp_su(-t * theta * a);
      t0[k] = theta * a;  // -(d/dt exp(-t theta a)) exp(t theta a)
      t1[k] = u_inv * (theta * bb) * u_inv.adjoint();
    }
    return std::make_pair(t0, t1);
  };

  const double theta = 1e-5;
  auto [x0a, x1a] = inverse_point(theta, psi1, psi2);
  auto [y0a, y1a] = inverse_point(theta, xi1, xi2);

  // I(X0, X1) = (X1, -X0); pair in L^2 over [0,1]
  std::vector<double> dens(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    CMatrix ix0 = x1a[k] / theta;
    CMatrix ix1 = -x0a[k] / theta;
    dens[k] = inner(ix0, y0a[k] / theta) + inner(ix1, y1a[k] / theta);
  }
  double omega = trapezoid(grid, dens);
  double expected = inner(psi2, xi1) - inner(psi1, xi2);
  CHECK(std::abs(omega - expected) < 1e-4);
}

TEST_CASE("polar construction produces moment-map solutions") {
  // a complexified group element g = k exp(i xi) determines baby data
  // u.(constant Hermitian part); transporting T0 away recovers the k factor
  Grid grid = Grid::interval(1.0, 1024);
  const int n = 2;
  Rng rng(89);
  CMatrix k_target = rng.unitary(n);
  CMatrix xi = 0.8 * rng.su(n);

  // alpha_g = u.(i xi) with u a path from 1 to k: T0 = -du/dt u^-1 transported,
  // T1 = -Ad(u) xi since alpha = T0 - i T1 and the constant part is i xi
  auto u0 = geodesic_path(grid, k_target);
  std::vector<CMatrix> t0(grid.size()), t1(grid.size());
  CMatrix logk = unitary_log(k_target);
  for (int i = 0; i < grid.size(); ++i) {
    t0[i] = -logk;  // -du/dt u^-1 for u = exp(t log k)
    t1[i] = -(u0[i] * xi * u0[i].adjoint());
  }
  CHECK(baby_residual_sup(grid, t0, t1) < 1e-8);

  auto [k_rec, xi0] = baby_phi_interval(grid, t0, t1);
  CHECK((k_rec - k_target.adjoint()).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((xi0 + xi).cwiseAbs().maxCoeff() < 1e-12);
}
