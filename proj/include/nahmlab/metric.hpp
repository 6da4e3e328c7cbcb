#ifndef NAHMLAB_METRIC_HPP
#define NAHMLAB_METRIC_HPP

#include "nahmlab/nahm.hpp"

namespace nahmlab {

// ---------------------------------------------------------------------------
// Regularized pairing on tangent data. On the half-line the plain L^2 pairing
// diverges whenever the limits delta = X(infinity) are nonzero; the
// regularization subtracts the limit density and weights it by b:
//
//   <X, Y>_{B,b} = b sum <delta^X_i, delta^Y_i>
//                  + int_0^inf sum (<X_i, Y_i> - <delta^X_i, delta^Y_i>) dt.
//
// Past tail_start the subtracted integrand is evaluated in closed form from
// the 1/(2(t+1)) coefficients eps: int <eps,eps>/(4(1+t)^2) = <eps,eps>/(4(1+ts)).
// The cross density <delta, eps>/(t+1) integrates to a logarithm, so any
// pairing with non-orthogonal (delta, eps) data is rejected rather than
// truncated. Interval inputs get the plain L^2 pairing; the b-weighted
// endpoint convention appears only in the gluing identity below.
// ---------------------------------------------------------------------------

struct MetricConfig {
  double b = 1.0;
  bool analytic_tail = true;
  double tail_start = -1.0;  // negative: use t_max / 2
};

struct PairingReport {
  double value = 0;
  double interval_part = 0;
  double tail_part = 0;
  double boundary_part = 0;
  double tail_remainder_bound = 0;  // diagnostic, not included in value
};

PairingReport bielawski_pair(const TangentVector& x, const TangentVector& y,
                             const MetricConfig& cfg);

/// Two-component analogue used by the interval/half-line Kahler picture
/// (pairs (X0, X1) with limits delta and no eps terms).
PairingReport bielawski_pair2(const Grid& grid, const std::vector<CMatrix>& x0,
                              const std::vector<CMatrix>& x1, const CMatrix& delta0_x,
                              const CMatrix& delta1_x, const std::vector<CMatrix>& y0,
                              const std::vector<CMatrix>& y1, const CMatrix& delta0_y,
                              const CMatrix& delta1_y, const MetricConfig& cfg);

// ---------------------------------------------------------------------------
// Quaternionic structures, induced by right multiplication by -i, j, k on
// quadruples; they permute the asymptotic data the same way.
// ---------------------------------------------------------------------------

enum class Axis { I, J, K };

TangentVector quaternion_act(Axis axis, const TangentVector& x);

/// omega_axis(X, Y) = <axis . X, Y>_{B,b}; antisymmetric.
double symplectic_pair(Axis axis, const TangentVector& x, const TangentVector& y,
                       const MetricConfig& cfg);

// ---------------------------------------------------------------------------
// Moment maps. The Nahm residual itself is minus the hyperkahler moment map
// of the gauge action (see nahm_residual); the residual torus and boundary
// actions evaluate at the ends:
// ---------------------------------------------------------------------------

/// Torus moment map: the commuting triple tau = T(infinity).
std::array<CMatrix, 3> moment_torus(const NahmPath& t);

/// Moment map of the boundary group action: (-T1(0), -T2(0), -T3(0)).
std::array<CMatrix, 3> moment_boundary(const NahmPath& t);

// ---------------------------------------------------------------------------
// Gluing an interval solution on [0,1] to a half-line solution. Matching
// tangent pairs satisfy
//
//   ||X||^2_{L^2[0,1]} + ||X~||^2_{B,b}  =  ||concatenation||^2_{B,b+1},
//
// the interval length shifting the weight b by one.
// ---------------------------------------------------------------------------

struct GlueReport {
  double junction_gap = 0;        // worst sample mismatch at the seam
  double t0_sup_near_junction = 0;
  double interval_l2 = 0;         // check pair: L^2 norm^2 on [0,1]
  double halfline_value = 0;      // check pair: B,b value on the half-line
  double concat_value = 0;        // check pair: B,b+1 value of the concatenation
  double mismatch = 0;            // |interval_l2 + halfline_value - concat_value|
};

struct GlueResult {
  NahmPath glued;
  GlueReport report;
};

GlueResult glue_paths(const NahmPath& t_interval, const NahmPath& t_halfline,
                      const MetricConfig& cfg);

/// Concatenated tangent data evaluated in the B,b+1 pairing (the half-line
/// tail keeps its own pole). Junction samples must agree to 1e-8.
double concat_pair_value(const TangentVector& x_interval,
                         const TangentVector& x_halfline,
                         const TangentVector& y_interval,
                         const TangentVector& y_halfline, const MetricConfig& cfg);

}  // namespace nahmlab

#endif
