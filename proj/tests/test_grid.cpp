#include <doctest.h>

#include <cmath>

#include "nahmlab/grid.hpp"

using namespace nahmlab;

TEST_CASE("grid construction") {
  Grid gi = Grid::interval(1.0, 64);
  CHECK(gi.nodes.front() == 0.0);
  CHECK(gi.nodes.back() == 1.0);
  CHECK_FALSE(gi.is_half_line());

  Grid gh = Grid::half_line(40.0, 128);
  CHECK(gh.nodes.front() == 0.0);
  CHECK(gh.nodes.back() == 40.0);
  // geometric in 1+t: constant ratio
  double r0 = (1 + gh.nodes[1]) / (1 + gh.nodes[0]);
  double r1 = (1 + gh.nodes[64]) / (1 + gh.nodes[63]);
  CHECK(r0 == doctest::Approx(r1).epsilon(1e-10));

  CHECK_THROWS(Grid::interval(1.0, 8));
}

TEST_CASE("derivatives are fourth order on a smooth path") {
  auto sample = [](const Grid& g) {
    std::vector<CMatrix> f(g.size());
    for (int k = 0; k < g.size(); ++k) {
      CMatrix m(2, 2);
      double t = g.nodes[k];
      m << Complex(std::sin(t), 0), Complex(0, std::cos(2 * t)),
          Complex(0, -std::cos(2 * t)), Complex(-std::sin(t), 0);
      f[k] = m;
    }
    return f;
  };
  auto worst = [&](const Grid& g) {
    auto d = path_derivative(g, sample(g));
    double e = 0;
    for (int k = 0; k < g.size(); ++k) {
      double t = g.nodes[k];
      CMatrix m(2, 2);
      m << Complex(std::cos(t), 0), Complex(0, -2 * std::sin(2 * t)),
          Complex(0, 2 * std::sin(2 * t)), Complex(-std::cos(t), 0);
      e = std::max(e, (d[k] - m).cwiseAbs().maxCoeff());
    }
    return e;
  };
  double e1 = worst(Grid::interval(3.0, 200));
  double e2 = worst(Grid::interval(3.0, 400));
  CHECK(e2 < e1 / 12.0);  // 4th order: factor ~16 per halving

  // on the geometric half-line grid the spacing grows with 1+t, matched to
  // integrands whose derivatives decay at least as fast
  Grid gh = Grid::half_line(20.0, 4096);
  std::vector<CMatrix> f(gh.size());
  for (int k = 0; k < gh.size(); ++k) {
    CMatrix m(1, 1);
    m(0, 0) = 1.0 / (1.0 + gh.nodes[k]);
    f[k] = m;
  }
  auto d = path_derivative(gh, f);
  double e = 0;
  for (int k = 0; k < gh.size(); ++k) {
    double p = 1.0 + gh.nodes[k];
    e = std::max(e, std::abs(d[k](0, 0).real() + 1.0 / (p * p)));
  }
  CHECK(e < 1e-9);
}

TEST_CASE("second derivative") {
  Grid g = Grid::interval(2.0, 400);
  std::vector<CMatrix> f(g.size());
  for (int k = 0; k < g.size(); ++k) {
    CMatrix m(1, 1);
    m(0, 0) = std::exp(-g.nodes[k]);
    f[k] = m;
  }
  auto d2 = path_second_derivative(g, f);
  double e = 0;
  for (int k = 0; k < g.size(); ++k)
    e = std::max(e, std::abs(d2[k](0, 0).real() - std::exp(-g.nodes[k])));
  CHECK(e < 1e-8);
}

TEST_CASE("trapezoid and partial trapezoid") {
  Grid g = Grid::interval(1.0, 2001);
  std::vector<double> f(g.size());
  for (int k = 0; k < g.size(); ++k) f[k] = g.nodes[k] * g.nodes[k];
  CHECK(trapezoid(g, f) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(trapezoid_until(g, f, 0.5) == doctest::Approx(1.0 / 24.0).epsilon(1e-5));
  // constants integrate exactly
  std::vector<double> ones(g.size(), 1.0);
  CHECK(trapezoid(g, ones) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cubic interpolation hits smooth values") {
  Grid g = Grid::half_line(10.0, 512);
  std::vector<CMatrix> f(g.size());
  for (int k = 0; k < g.size(); ++k) {
    CMatrix m(1, 1);
    m(0, 0) = 1.0 / (1.0 + g.nodes[k]);
    f[k] = m;
  }
  for (double t : {0.013, 0.77, 3.14, 9.5}) {
    CMatrix v = interpolate(g, f, t);
    CHECK(std::abs(v(0, 0).real() - 1.0 / (1.0 + t)) < 1e-7);
  }
}
