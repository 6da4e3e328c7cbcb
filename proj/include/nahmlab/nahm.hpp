#ifndef NAHMLAB_NAHM_HPP
#define NAHMLAB_NAHM_HPP

#include "nahmlab/grid.hpp"
#include "nahmlab/lie.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace nahmlab {

// ---------------------------------------------------------------------------
// Sampled Nahm data. A quadruple (T0, T1, T2, T3) of su(n)-valued paths; on
// the half-line the path carries its asymptotic record: the limit tau0 of T0
// in Z(c), the commuting triple tau, and the su(2)-triple sigma of the
// 1/(2(t+1)) term.
// ---------------------------------------------------------------------------

using Quadruple = std::array<CMatrix, 4>;

struct NahmAsymptotics {
  CMatrix tau0;
  std::array<CMatrix, 3> tau;
  Su2Triple sigma;
  Stratum stratum;
};

struct NahmPath {
  Grid grid;
  std::vector<Quadruple> samples;
  std::optional<NahmAsymptotics> asym;

  int dim() const { return static_cast<int>(samples.at(0)[0].rows()); }
};

// Tangent data: quadruple (X0..X3) with limits delta_i in Z(c) and
// 1/(2(t+1)) coefficients eps_i in [c,c]. eps[0] is zero for tangent vectors
// in standard position; quaternion twists permute it into play.
struct TangentAsymptotics {
  std::array<CMatrix, 4> delta;
  std::array<CMatrix, 4> eps;
};

struct TangentVector {
  Grid grid;
  std::vector<Quadruple> samples;
  std::optional<TangentAsymptotics> asym;
};

/// Zero-asymptotics record of matching dimension.
TangentAsymptotics zero_tangent_asym(int n);

/// Checks the algebraic relations the asymptotic data must satisfy: delta in
/// Z(c), eps in [c,c], <delta_i, eps_i> = 0. Throws on violation.
void validate_tangent_asym(const TangentAsymptotics& a, const Stratum& s,
                           double tol = 1e-10);

// ---------------------------------------------------------------------------
// Operations.
// ---------------------------------------------------------------------------

/// The exact solution (tau0, tau_i + sigma_i / (2(t+1))) on a half-line grid.
/// Requires tau0 in Z(c(tau)) and sigma an su(2)-triple in [c,c].
NahmPath model_solution(const CMatrix& tau0, const std::array<CMatrix, 3>& tau,
                        const Su2Triple& sigma, const Grid& grid);

/// Residual of the Nahm system, dT_i/dt + [T0, T_i] - [T_j, T_k] for (ijk)
/// cyclic. Up to sign this is the hyperkahler moment map of the gauge action.
std::array<std::vector<CMatrix>, 3> nahm_residual(const NahmPath& t);
double nahm_residual_sup(const NahmPath& t);

/// RK4 integration of the T1,T2,T3 system with prescribed T0(t). Throws
/// (blow-up guard) when any component norm exceeds 1e6; Nahm flows can reach
/// poles in finite time and should fail loudly there.
NahmPath integrate_nahm_ivp(const Quadruple& initial,
                            const std::function<CMatrix(double)>& t0_of_t,
                            const Grid& grid);
NahmPath integrate_nahm_ivp(const Quadruple& initial, const CMatrix& t0_const,
                            const Grid& grid);

struct BlowUpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Linearization of the Nahm residual along X at T:
/// dX_i/dt + [T0, X_i] + [X0, T_i] - [T_j, X_k] - [X_j, T_k], (ijk) cyclic.
std::array<std::vector<CMatrix>, 3> linearized_nahm_residual(const NahmPath& t,
                                                             const TangentVector& x);

/// dX0/dt + sum_i [T_i, X_i]; vanishes iff X is orthogonal to the gauge
/// orbit through T in the regularized pairing.
std::vector<CMatrix> horizontality_residual(const NahmPath& t, const TangentVector& x);

// ---------------------------------------------------------------------------
// Decay diagnostics. Tail fits standing in for membership in the weighted
// spaces: the centralizer component of an admissible path decays like
// (1+t)^-(1+zeta), the off-block component like e^(-eta t).
// ---------------------------------------------------------------------------

struct DecayReport {
  double zeta_fit = 0;          // +inf when the D tail is identically zero
  double eta_fit = 0;           // +inf when the H tail is identically zero
  double zeta_fit_residual = 0; // rms residual of the log-log fit
  double eta_fit_residual = 0;
  double d_weighted_sup = 0;    // sup (1+t)^(1+zeta_fit) |f^D|
  double h_weighted_sup = 0;    // sup e^(eta_fit t) |f^H|
};

DecayReport decay_diagnostics(const Grid& grid, const std::vector<CMatrix>& f,
                              const Stratum& s);

/// Loose admissibility check of a half-line path against its own asymptotic
/// record; returns the worst deviation of T(t_max) from the model tail.
double asymptotic_gap(const NahmPath& t);

}  // namespace nahmlab

#endif
