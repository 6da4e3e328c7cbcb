#include "nahmlab/sampling.hpp"

#include <cmath>

namespace nahmlab {

double Rng::uniform() {
  // 53-bit mantissa from the top bits of the 64-bit state
  return double(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int Rng::uniform_int(int lo, int hi) {
  return lo + int(engine_() % std::uint64_t(hi - lo + 1));
}

CMatrix Rng::su(int n) {
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(normal(), normal());
  CMatrix x = 0.5 * (a - a.adjoint());
  x -= (x.trace() / double(n)) * CMatrix::Identity(n, n);
  return x;
}

CMatrix Rng::unitary(int n) {
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(normal(), normal());
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    Complex d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  Complex det = q.determinant();
  q.col(0) /= det;  // unit-phase column scaling keeps unitarity
  return q;
}

CMatrix Rng::in_span(const std::vector<CMatrix>& basis) {
  if (basis.empty()) throw std::invalid_argument("Rng::in_span: empty basis");
  CMatrix x = CMatrix::Zero(basis[0].rows(), basis[0].cols());
  for (const auto& e : basis) x += normal() * e;
  return x;
}

CMatrix Rng::sl(int n) {
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(normal(), normal());
  a -= (a.trace() / double(n)) * CMatrix::Identity(n, n);
  return a;
}

double bump(double t, double a, double b) {
  if (t <= a || t >= b) return 0.0;
  double u = (t - a) / (b - a);
  double v = u * (1.0 - u);
  return std::pow(4.0 * v, 5.0);
}

double bump_derivative(double t, double a, double b) {
  if (t <= a || t >= b) return 0.0;
  double u = (t - a) / (b - a);
  double v = u * (1.0 - u);
  return 5.0 * std::pow(4.0 * v, 4.0) * 4.0 * (1.0 - 2.0 * u) / (b - a);
}

}  // namespace nahmlab
