#ifndef NAHMLAB_GAUGE_HPP
#define NAHMLAB_GAUGE_HPP

#include "nahmlab/nahm.hpp"

#include <optional>
#include <utility>

namespace nahmlab {

// ---------------------------------------------------------------------------
// Group-valued paths. Unitary paths act on Nahm data by
//   T0 -> u T0 u^-1 - du/dt u^-1,   T_i -> u T_i u^-1,
// complexified paths act the same way on (alpha, beta) data. A path built
// with linear asymptotic growth exp((t - b) s + ...) records its slope
// s(u) = lim du/dt u^-1 in Z(c).
// ---------------------------------------------------------------------------

enum class GaugeFlavor { Unitary, Complexified };

struct GaugePath {
  Grid grid;
  std::vector<CMatrix> samples;
  GaugeFlavor flavor = GaugeFlavor::Unitary;
  std::optional<CMatrix> slope;  // s(u), when known by construction

  // du/dt u^-1 samples for paths built from closed forms. When absent, the
  // action falls back to finite differences of the samples (projected to
  // skew-Hermitian for unitary paths).
  std::optional<std::vector<CMatrix>> omega;

  const CMatrix& at_start() const { return samples.front(); }
  const CMatrix& at_end() const { return samples.back(); }
};

struct GaugeAlgebraAsymptotics {
  CMatrix slope;  // d xi / dt at infinity, in Z(c)
  CMatrix limit;  // limit of xi(t) - (t - b) * slope
};

struct GaugeAlgebraPath {
  Grid grid;
  std::vector<CMatrix> samples;  // xi(0) = 0
  std::optional<GaugeAlgebraAsymptotics> asym;
};

/// Pointwise exponential of an algebra path (unitary flavor).
GaugePath gauge_exp(const GaugeAlgebraPath& xi);

/// u(t) = exp(w(t) dir) for a scalar profile w: the logarithmic derivative
/// w'(t) dir is exact and carried along.
GaugePath gauge_ray(const Grid& grid, const CMatrix& dir, const std::vector<double>& w,
                    const std::vector<double>& w_dot);

/// Pointwise product (u v)(t) = u(t) v(t).
GaugePath compose_gauge(const GaugePath& u, const GaugePath& v);

/// The gauge action. Unitary u only; du/dt u^-1 is formed by finite
/// differences and projected back to skew-Hermitian. When T carries an
/// asymptotic record, tau0 shifts by -s(u) (zero slope when absent).
NahmPath apply_gauge(const GaugePath& u, const NahmPath& t);

/// Induced action on tangent vectors: pointwise conjugation, (delta, eps)
/// kept (valid for slope-free u asymptotic to the centralizer of sigma).
TangentVector apply_gauge(const GaugePath& u, const TangentVector& x);

/// Fundamental vector field of the gauge action at T:
///   X^xi_T = ([xi, T0] - dxi/dt, [xi, T1], [xi, T2], [xi, T3]).
/// With asymptotic data, delta = (-slope, 0, 0, 0) and eps_i = [limit, sigma_i].
TangentVector fundamental_vector_field(const GaugeAlgebraPath& xi, const NahmPath& t);

// ---------------------------------------------------------------------------
// Gauge fixing.
// ---------------------------------------------------------------------------

struct TemporalGaugeResult {
  GaugePath u;      // u(0) = 1, solves du/dt = u T0
  NahmPath path;    // u.T, with T0 component ~ 0
  double max_unitary_drift = 0;  // worst deviation u u* - 1 seen before projection
  bool drift_warning = false;    // drift exceeded 1e-6 at some step
};

/// Unique u with u(0) = 1 and u.T0 = 0. Unitarity is restored by polar
/// projection every 64 steps; accumulated drift is reported.
TemporalGaugeResult gauge_t0_to_zero(const NahmPath& t);

/// Gauges the Z(c)-limit tau0 of T0 away along u = exp((t - b + b e^{-ct}) tau0).
/// The residual T0 component of the result is c b e^{-ct} tau0.
std::pair<GaugePath, NahmPath> center_tau0(const NahmPath& t, double b, double c);

// ---------------------------------------------------------------------------
// Interval moduli coordinates: with alpha = T0 - i T1 and beta = T2 + i T3,
// the complex gauge transformation g with g(0) = 1 and g.alpha = 0 solves
// dg/dt = g alpha, and (g(1), beta(0)) identifies the moduli space of
// solutions on [0,1] with the cotangent bundle of the complexified group.
// ---------------------------------------------------------------------------

struct KronheimerData {
  CMatrix g_end;   // g(1) in SL(n, C)
  CMatrix beta0;   // beta(0) in sl(n, C)
  double residual_sup = 0;  // Nahm residual of the input
  bool residual_warning = false;
};

KronheimerData kronheimer_map(const NahmPath& t);

// ---------------------------------------------------------------------------
// Complexified picture: the complex equation d beta / dt = [beta, alpha] is
// preserved by alpha -> g alpha g^-1 - dg/dt g^-1, beta -> g beta g^-1.
// ---------------------------------------------------------------------------

using ComplexPair = std::pair<std::vector<CMatrix>, std::vector<CMatrix>>;

ComplexPair apply_complex_gauge(const GaugePath& g, const std::vector<CMatrix>& alpha,
                                const std::vector<CMatrix>& beta);

double complex_equation_residual_sup(const Grid& grid,
                                     const std::vector<CMatrix>& alpha,
                                     const std::vector<CMatrix>& beta);

/// The exact complex-equation solution carried by a model solution:
/// alpha = -i(tau_1 + sigma_1/(2(t+1))), beta = tau_2 + i tau_3
///         + (sigma_2 + i sigma_3)/(2(t+1)).
ComplexPair model_complex_pair(const std::array<CMatrix, 3>& tau,
                               const Su2Triple& sigma, const Grid& grid);

/// Orbit coordinates of complex-gauge orbits through model data: the value of
/// g at 0 together with the constant matrix tau_2 + i tau_3 + (sigma_2 + i
/// sigma_3)/2.
struct ComplexOrbitCoordinates {
  CMatrix g0;
  CMatrix tau_c_plus_y;
};

ComplexOrbitCoordinates complex_orbit_coordinates(const GaugePath& g,
                                                  const std::array<CMatrix, 3>& tau,
                                                  const Su2Triple& sigma);

// ---------------------------------------------------------------------------
// Polar decomposition g = k exp(i xi), k unitary, exp(i xi) positive
// Hermitian, xi skew-Hermitian (traceless when det g = 1). SVD-based.
// ---------------------------------------------------------------------------

struct PolarFactors {
  CMatrix k;
  CMatrix xi;
};

PolarFactors polar_decompose(const CMatrix& g);

// Shared linear matrix ODE driver: integrates du/dt = u A(t) or du/dt = A(t) u
// with u(0) = 1, fourth order (RK4 over locally cubic-interpolated samples).
enum class OdeSide { Right, Left };
std::vector<CMatrix> integrate_transport(const Grid& grid,
                                         const std::vector<CMatrix>& a, OdeSide side,
                                         bool unitary_project,
                                         double* max_drift = nullptr);

}  // namespace nahmlab

#endif
