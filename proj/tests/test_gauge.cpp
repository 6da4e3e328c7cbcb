#include <doctest.h>

#include <cmath>

#include "nahmlab/gauge.hpp"
#include "nahmlab/metric.hpp"
#include "nahmlab/sampling.hpp"

using namespace nahmlab;

namespace {

std::array<CMatrix, 3> zero_triple(int n) {
  CMatrix z = CMatrix::Zero(n, n);
  return {z, z, z};
}

NahmPath su2_principal_model(const Grid& grid) {
  Su2Triple sig = su2_triple_from_partition(2, {2});
  return model_solution(CMatrix::Zero(2, 2), zero_triple(2), sig, grid);
}

GaugePath window_gauge(Rng& rng, int n, const Grid& grid, double lo, double hi,
                       double amplitude) {
  GaugeAlgebraPath xi;
  xi.grid = grid;
  xi.samples.resize(grid.size());
  CMatrix dir = amplitude * rng.su(n);
  for (int k = 0; k < grid.size(); ++k)
    xi.samples[k] = bump(grid.nodes[k], lo, hi) * dir;
  return gauge_exp(xi);
}

GaugePath identity_gauge(int n, const Grid& grid) {
  GaugePath u;
  u.grid = grid;
  u.flavor = GaugeFlavor::Unitary;
  u.samples.assign(grid.size(), CMatrix::Identity(n, n));
  return u;
}

}  // namespace

TEST_CASE("apply_gauge basics") {
  Grid grid = Grid::half_line(40.0, 4096);
  NahmPath t = su2_principal_model(grid);

  SUBCASE("identity leaves the path alone") {
    NahmPath tu = apply_gauge(identity_gauge(2, grid), t);
    double worst = 0;
    for (int k = 0; k < grid.size(); k += 100)
      for (int i = 0; i < 4; ++i)
        worst = std::max(worst,
                         (tu.samples[k][i] - t.samples[k][i]).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-12);
  }

  SUBCASE("constant centralizer element fixes a sigma = 0 model") {
    CMatrix tau1 = CMatrix::Zero(2, 2);
    tau1(0, 0) = Complex(0, 1);
    tau1(1, 1) = Complex(0, -1);
    Stratum s = centralizer_blocks({tau1, CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)});
    Su2Triple sig0 = su2_triple_from_partition(s, {{1}, {1}});
    NahmPath tm = model_solution(CMatrix::Zero(2, 2),
                                 {tau1, CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)}, sig0,
                                 grid);
    // diagonal torus element commutes with the diagonal model
    CMatrix c = CMatrix::Zero(2, 2);
    c(0, 0) = std::exp(Complex(0, 0.9));
    c(1, 1) = std::exp(Complex(0, -0.9));
    GaugePath u = identity_gauge(2, grid);
    u.samples.assign(grid.size(), c);
    NahmPath tu = apply_gauge(u, tm);
    double worst = 0;
    for (int k = 0; k < grid.size(); k += 100)
      for (int i = 0; i < 4; ++i)
        worst = std::max(worst,
                         (tu.samples[k][i] - tm.samples[k][i]).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-12);
  }

  SUBCASE("action property and isometry") {
    Rng rng(21);
    GaugePath u = window_gauge(rng, 2, grid, 0.3, 6.0, 0.4);
    GaugePath v = window_gauge(rng, 2, grid, 2.0, 11.0, 0.3);
    NahmPath lhs = apply_gauge(compose_gauge(u, v), t);
    NahmPath rhs = apply_gauge(u, apply_gauge(v, t));
    double worst = 0;
    for (int k = 0; k < grid.size(); k += 50)
      for (int i = 0; i < 4; ++i)
        worst = std::max(worst,
                         (lhs.samples[k][i] - rhs.samples[k][i]).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-8);

    // conjugating tangent data preserves the regularized pairing
    Rng rng2(22);
    TangentVector x, y;
    x.grid = y.grid = grid;
    x.samples.resize(grid.size());
    y.samples.resize(grid.size());
    std::array<CMatrix, 4> dx, dy;
    for (auto& m : dx) m = 0.5 * rng2.su(2);
    for (auto& m : dy) m = 0.5 * rng2.su(2);
    for (int k = 0; k < grid.size(); ++k) {
      double w = bump(grid.nodes[k], 0.5, 14.0);
      for (int i = 0; i < 4; ++i) {
        x.samples[k][i] = w * dx[i];
        y.samples[k][i] = w * dy[i];
      }
    }
    x.asym = zero_tangent_asym(2);
    y.asym = zero_tangent_asym(2);
    MetricConfig cfg;
    cfg.b = 1.7;
    double base = bielawski_pair(x, y, cfg).value;
    double moved = bielawski_pair(apply_gauge(u, x), apply_gauge(u, y), cfg).value;
    CHECK(moved == doctest::Approx(base).epsilon(1e-8));
  }
}

TEST_CASE("fundamental vector field") {
  Grid grid = Grid::half_line(40.0, 4096);
  NahmPath t = su2_principal_model(grid);
  Rng rng(23);

  SUBCASE("zero generator") {
    GaugeAlgebraPath xi;
    xi.grid = grid;
    xi.samples.assign(grid.size(), CMatrix::Zero(2, 2));
    TangentVector x = fundamental_vector_field(xi, t);
    for (int k = 0; k < grid.size(); k += 200)
      for (int i = 0; i < 4; ++i) CHECK(x.samples[k][i].cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("asymptotic tail carries [limit, sigma_i]") {
    // generator converging to a commutator-algebra element
    Su2Triple sig = su2_triple_from_partition(2, {2});
    CMatrix dir = 0.5 * sig.sigma[1];
    GaugeAlgebraPath xi;
    xi.grid = grid;
    xi.samples.resize(grid.size());
    for (int k = 0; k < grid.size(); ++k)
      xi.samples[k] = (1.0 - std::exp(-grid.nodes[k])) * dir;
    xi.asym = GaugeAlgebraAsymptotics{CMatrix::Zero(2, 2), dir};
    TangentVector x = fundamental_vector_field(xi, t);
    REQUIRE(x.asym.has_value());
    for (int i = 0; i < 3; ++i)
      CHECK((x.asym->eps[i + 1] - bracket(dir, sig.sigma[i])).cwiseAbs().maxCoeff() <
            1e-14);
    // sampled tail approaches eps/(2(t+1))
    int k = grid.size() - 1;
    double c = 1.0 / (2.0 * (grid.nodes[k] + 1.0));
    CHECK((x.samples[k][2] - c * x.asym->eps[2]).cwiseAbs().maxCoeff() < 1e-6);
  }

  SUBCASE("flow differencing oracle") {
    GaugeAlgebraPath xi;
    xi.grid = grid;
    xi.samples.resize(grid.size());
    CMatrix dir = 0.7 * rng.su(2);
    for (int k = 0; k < grid.size(); ++k)
      xi.samples[k] = bump(grid.nodes[k], 0.4, 9.0) * dir;
    TangentVector x = fundamental_vector_field(xi, t);

    const double theta = 1e-5;
    GaugeAlgebraPath xith = xi;
    for (auto& m : xith.samples) m *= theta;
    NahmPath moved = apply_gauge(gauge_exp(xith), t);
    double worst = 0;
    for (int k = 0; k < grid.size(); k += 64)
      for (int i = 0; i < 4; ++i)
        worst = std::max(
            worst, ((moved.samples[k][i] - t.samples[k][i]) / theta - x.samples[k][i])
                       .cwiseAbs()
                       .maxCoeff());
    CHECK(worst < 50 * theta);
  }

  SUBCASE("horizontal tangents pair to zero with vanishing-at-0 generators") {
    CMatrix tau1 = CMatrix::Zero(3, 3);
    tau1(0, 0) = tau1(1, 1) = Complex(0, 1);
    tau1(2, 2) = Complex(0, -2);
    std::array<CMatrix, 3> tau = {tau1, CMatrix::Zero(3, 3), CMatrix::Zero(3, 3)};
    Stratum s = centralizer_blocks(tau);
    Su2Triple sig = su2_triple_from_partition(s, {{1, 1}, {1}});
    NahmPath tm = model_solution(CMatrix::Zero(3, 3), tau, sig, grid);
    CMatrix delta = center_basis(s).front();
    TangentVector x;
    x.grid = grid;
    x.samples.assign(grid.size(), {CMatrix::Zero(3, 3), delta, delta, delta});
    auto a = zero_tangent_asym(3);
    a.delta = {CMatrix::Zero(3, 3), delta, delta, delta};
    x.asym = a;

    GaugeAlgebraPath xi;
    xi.grid = grid;
    xi.samples.resize(grid.size());
    CMatrix dir = 0.5 * rng.su(3);
    for (int k = 0; k < grid.size(); ++k)
      xi.samples[k] = bump(grid.nodes[k], 0.1, 11.0) * dir;
    TangentVector xf = fundamental_vector_field(xi, tm);
    MetricConfig cfg;
    cfg.b = 1.0;
    CHECK(std::abs(bielawski_pair(xf, x, cfg).value) < 1e-6);
  }
}

TEST_CASE("gauge_t0_to_zero") {
  SUBCASE("already temporal") {
    Grid grid = Grid::half_line(40.0, 2048);
    NahmPath t = su2_principal_model(grid);
    auto res = gauge_t0_to_zero(t);
    for (int k = 0; k < grid.size(); k += 100)
      CHECK((res.u.samples[k] - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("constant T0 integrates to the exponential") {
    Grid grid = Grid::interval(1.0, 1024);
    Rng rng(25);
    CMatrix a = 0.9 * rng.su(2);
    NahmPath t;
    t.grid = grid;
    t.samples.assign(grid.size(), {a, CMatrix::Zero(2, 2), CMatrix::Zero(2, 2),
                                   CMatrix::Zero(2, 2)});
    auto res = gauge_t0_to_zero(t);
    double worst = 0;
    for (int k = 0; k < grid.size(); k += 64)
      worst = std::max(worst, (res.u.samples[k] - exp_su(grid.nodes[k] * a))
                                  .cwiseAbs()
                                  .maxCoeff());
    CHECK(worst < 1e-9);
    CHECK(sup_norm([&] {
            std::vector<CMatrix> t0(grid.size());
            for (int k = 0; k < grid.size(); ++k) t0[k] = res.path.samples[k][0];
            return t0;
          }()) < 1e-8);
    CHECK(res.max_unitary_drift < 1e-6);
  }

  SUBCASE("gauging a moment-map solution makes T1 constant") {
    Grid grid = Grid::interval(1.0, 1024);
    Rng rng(26);
    // start from (0, xi) and move it by a gauge transformation
    CMatrix xi0 = rng.su(2);
    NahmPath t;
    t.grid = grid;
    t.samples.resize(grid.size());
    GaugePath w = window_gauge(rng, 2, grid, 0.1, 0.9, 0.6);
    NahmPath flat;
    flat.grid = grid;
    flat.samples.assign(grid.size(), {CMatrix::Zero(2, 2), xi0, CMatrix::Zero(2, 2),
                                      CMatrix::Zero(2, 2)});
    t = apply_gauge(w, flat);

    auto res = gauge_t0_to_zero(t);
    double worst = 0;
    for (int k = 0; k < grid.size(); ++k)
      worst = std::max(worst,
                       (res.path.samples[k][1] - xi0).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("center_tau0") {
  Grid grid = Grid::half_line(40.0, 4096);
  CMatrix tau1 = CMatrix::Zero(3, 3);
  tau1(0, 0) = tau1(1, 1) = Complex(0, 0.5);
  tau1(2, 2) = Complex(0, -1.0);
  std::array<CMatrix, 3> tau = {tau1, CMatrix::Zero(3, 3), CMatrix::Zero(3, 3)};
  Stratum s = centralizer_blocks(tau);
  Su2Triple sig = su2_triple_from_partition(s, {{2}, {1}});

  SUBCASE("tau0 = 0 input is unchanged") {
    NahmPath t = model_solution(CMatrix::Zero(3, 3), tau, sig, grid);
    auto [u, tp] = center_tau0(t, 1.0, 1.0);
    double worst = 0;
    for (int k = 0; k < grid.size(); k += 128)
      for (int i = 0; i < 4; ++i)
        worst = std::max(worst,
                         (tp.samples[k][i] - t.samples[k][i]).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-10);
  }

  SUBCASE("closed-form residual T0 and generator limits") {
    CMatrix tau0 = 0.8 * center_basis(s).front();
    NahmPath t = model_solution(tau0, tau, sig, grid);
    double b = 1.0, c = 1.0;
    auto [u, tp] = center_tau0(t, b, c);
    double worst = 0;
    for (int k = 0; k < grid.size(); ++k) {
      CMatrix expect = c * b * std::exp(-c * grid.nodes[k]) * tau0;
      worst = std::max(worst, (tp.samples[k][0] - expect).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-9);
    CHECK(tp.asym->tau0.cwiseAbs().maxCoeff() < 1e-14);

    // generator: xi(0) = 0, slope tau0, linear-growth remainder vanishing
    auto f = [&](double tt) { return tt - b + b * std::exp(-c * tt); };
    CHECK(f(0.0) == 0.0);
    double t_end = grid.t_max();
    CHECK(std::abs((f(t_end) - f(t_end - 1.0)) - 1.0) < 1e-12);  // slope 1 * tau0
    CHECK(std::abs(f(t_end) - (t_end - b)) < 1e-12);             // remainder limit 0

    CHECK_THROWS(center_tau0(su2_principal_model(grid), 1.0, 0.0));
  }
}

TEST_CASE("kronheimer_map") {
  Grid grid = Grid::interval(1.0, 1024);
  const int n = 2;
  CMatrix zero = CMatrix::Zero(n, n);

  SUBCASE("commuting constants give (1, b2 + i b3)") {
    CMatrix b2 = zero, b3 = zero;
    b2(0, 0) = Complex(0, 0.3);
    b2(1, 1) = Complex(0, -0.3);
    b3(0, 0) = Complex(0, -1.1);
    b3(1, 1) = Complex(0, 1.1);
    NahmPath t;
    t.grid = grid;
    t.samples.assign(grid.size(), {zero, zero, b2, b3});
    auto kd = kronheimer_map(t);
    CHECK((kd.g_end - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((kd.beta0 - (b2 + Complex(0, 1) * b3)).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("pure T0 gives the exponential") {
    Rng rng(27);
    CMatrix a = 0.8 * rng.su(n);
    NahmPath t;
    t.grid = grid;
    t.samples.assign(grid.size(), {a, zero, zero, zero});
    auto kd = kronheimer_map(t);
    CHECK((kd.g_end - exp_su(a)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(kd.beta0.cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("inverse construction recovers the group coordinate") {
    Rng rng(28);
    CMatrix k = rng.unitary(n);
    CMatrix logk = unitary_log(k);
    GaugeAlgebraPath xi;
    xi.grid = grid;
    xi.samples.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) xi.samples[i] = -grid.nodes[i] * logk;
    GaugePath u_inv = gauge_exp(xi);

    CMatrix b2 = zero, b3 = zero;
    b2(0, 0) = Complex(0, 0.4);
    b2(1, 1) = Complex(0, -0.4);
    b3(0, 0) = Complex(0, 0.9);
    b3(1, 1) = Complex(0, -0.9);
    NahmPath flat;
    flat.grid = grid;
    flat.samples.assign(grid.size(), {zero, zero, b2, b3});
    NahmPath t = apply_gauge(u_inv, flat);
    auto kd = kronheimer_map(t);
    CHECK((kd.g_end - k).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((kd.beta0 - (b2 + Complex(0, 1) * b3)).cwiseAbs().maxCoeff() < 1e-7);
  }

  SUBCASE("invariance under gauge transformations fixing the endpoints") {
    Rng rng(29);
    Su2Triple sig = su2_triple_from_partition(n, {2});
    NahmPath base;
    base.grid = grid;
    base.samples.resize(grid.size());
    for (int k = 0; k < grid.size(); ++k) {
      double s = 1.0 / (2.0 * (grid.nodes[k] + 1.0));
      base.samples[k] = {zero, s * sig.sigma[0], s * sig.sigma[1], s * sig.sigma[2]};
    }
    auto kd0 = kronheimer_map(base);
    for (int rep = 0; rep < 5; ++rep) {
      GaugePath u = window_gauge(rng, n, grid, 0.05, 0.95, 0.5);
      auto kd = kronheimer_map(apply_gauge(u, base));
      CHECK((kd.g_end - kd0.g_end).cwiseAbs().maxCoeff() < 1e-8);
      CHECK((kd.beta0 - kd0.beta0).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("complex gauge action") {
  Grid grid = Grid::half_line(40.0, 4096);
  const int n = 2;
  Su2Triple sig = su2_triple_from_partition(n, {2});
  CMatrix tau1 = CMatrix::Zero(n, n);  // nilpotent-type model: tau = 0
  auto [alpha0, beta0] = model_complex_pair({tau1, tau1, tau1}, sig, grid);

  SUBCASE("the model pair solves the complex equation") {
    CHECK(complex_equation_residual_sup(grid, alpha0, beta0) < 1e-10);
  }

  SUBCASE("identity acts trivially") {
    GaugePath g;
    g.grid = grid;
    g.flavor = GaugeFlavor::Complexified;
    g.samples.assign(grid.size(), CMatrix::Identity(n, n));
    auto [a, b] = apply_complex_gauge(g, alpha0, beta0);
    double worst = 0;
    for (int k = 0; k < grid.size(); k += 200) {
      worst = std::max(worst, (a[k] - alpha0[k]).cwiseAbs().maxCoeff());
      worst = std::max(worst, (b[k] - beta0[k]).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-10);
  }

  SUBCASE("smooth complexified transformations preserve the equation") {
    Rng rng(31);
    CMatrix dir = 0.4 * rng.sl(n);
    GaugePath g;
    g.grid = grid;
    g.flavor = GaugeFlavor::Complexified;
    g.samples.resize(grid.size());
    for (int k = 0; k < grid.size(); ++k) {
      double w = bump(grid.nodes[k], 0.2, 10.0);
      CMatrix e = w * dir;
      // series exponential; small norm
      CMatrix acc = CMatrix::Identity(n, n), term = CMatrix::Identity(n, n);
      for (int p = 1; p < 16; ++p) {
        term = term * e / double(p);
        acc += term;
      }
      g.samples[k] = acc;
    }
    auto [a, b] = apply_complex_gauge(g, alpha0, beta0);
    double in_res = complex_equation_residual_sup(grid, alpha0, beta0);
    double out_res = complex_equation_residual_sup(grid, a, b);
    CHECK(out_res < 1e-7);
    CHECK(out_res <= 10.0 * in_res + 1e-8);

    auto coords = complex_orbit_coordinates(g, {tau1, tau1, tau1}, sig);
    CHECK((coords.g0 - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((coords.tau_c_plus_y -
           0.5 * (sig.sigma[1] + Complex(0, 1) * sig.sigma[2]))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
  }
}

TEST_CASE("polar decomposition") {
  Rng rng(33);

  SUBCASE("unitary input") {
    CMatrix u = rng.unitary(3);
    auto pf = polar_decompose(u);
    CHECK((pf.k - u).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(pf.xi.cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("positive input") {
    CMatrix xi = 0.6 * rng.su(3);
    CMatrix g = exp_hermitian(Complex(0, 1) * xi);
    auto pf = polar_decompose(g);
    CHECK((pf.k - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((pf.xi - xi).cwiseAbs().maxCoeff() < 1e-11);
  }

  SUBCASE("round-trip on random special matrices") {
    for (int rep = 0; rep < 10; ++rep) {
      CMatrix g = exp_su(0.7 * rng.su(3)) * exp_hermitian(Complex(0, 1) * 0.5 * rng.su(3));
      auto pf = polar_decompose(g);
      CHECK((pf.k * pf.k.adjoint() - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
            1e-12);
      CMatrix p = exp_hermitian(Complex(0, 1) * pf.xi);
      CHECK((pf.k * p - g).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK_THROWS(polar_decompose(2.0 * CMatrix::Identity(3, 3)));
  }
}
