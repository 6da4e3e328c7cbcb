#ifndef NAHMLAB_IMPLOSION_HPP
#define NAHMLAB_IMPLOSION_HPP

#include "nahmlab/gauge.hpp"
#include "nahmlab/metric.hpp"

namespace nahmlab {

// ---------------------------------------------------------------------------
// The Kahler reduction of pairs (T0, T1) by the interval/half-line gauge
// action: the moment-map equation is dT1/dt + [T0, T1] = 0, and its moduli
// realize the cotangent bundle of the group and the symplectic implosion of
// the latter. Points are identified with (K x face) data through transport
// of T0 to zero.
// ---------------------------------------------------------------------------

std::vector<CMatrix> baby_residual(const Grid& grid, const std::vector<CMatrix>& t0,
                                   const std::vector<CMatrix>& t1);
double baby_residual_sup(const Grid& grid, const std::vector<CMatrix>& t0,
                         const std::vector<CMatrix>& t1);

/// Interval identification: (u0(1), T1(0)) with u0 the unique transport
/// killing T0, u0(0) = 1. Invariant under gauge transformations fixing both
/// endpoints.
std::pair<CMatrix, CMatrix> baby_phi_interval(const Grid& grid,
                                              const std::vector<CMatrix>& t0,
                                              const std::vector<CMatrix>& t1);

// ---------------------------------------------------------------------------
// Half-line picture over a Weyl chamber face.
// ---------------------------------------------------------------------------

struct WeylFace {
  CMatrix tau1;                  // diagonal, sorted into the closed chamber
  std::vector<int> blocks;       // equality pattern
  Stratum stratum;               // built from (tau1, 0, 0)
  std::vector<int> permutation;  // applied to sort the input
};

WeylFace weyl_face(const CMatrix& tau1_raw);

struct HalfLinePoint {
  CMatrix k;     // group coordinate, defined up to right multiplication
                 // by per-block special unitaries
  CMatrix tau1;  // face coordinate
};

HalfLinePoint baby_phi_halfline(const Grid& grid, const std::vector<CMatrix>& t0,
                                const std::vector<CMatrix>& t1, const WeylFace& face);

/// Decides k2 ~ k1 c for c in the commutator subgroup of the face centralizer
/// (block special unitaries), by projecting k1^-1 k2 to the nearest such c.
bool phi_points_equivalent(const WeylFace& face, const CMatrix& k1, const CMatrix& k2,
                           double tol = 1e-8);

// ---------------------------------------------------------------------------
// Closed-form tangent data at a model point (0, tau1). The generator
// xi(t) = (t - b) slope + sum_alpha xi_alpha(0) e^{-alpha t} produces
//   X0 = -dxi/dt,  X1 = [xi, tau1] + delta1,
// with each root coefficient decaying at its own rate alpha.
// ---------------------------------------------------------------------------

struct ImplosionTangent {
  WeylFace face;
  CMatrix delta1;                           // in Z(c)
  CMatrix slope;                            // xi'(infinity), in Z(c)
  std::vector<Eigen::Vector2d> root_coeffs; // xi_alpha(0) in root-space coordinates
  double b = 1.0;
};

struct BabyTangentSamples {
  Grid grid;
  std::vector<CMatrix> x0, x1;
  CMatrix delta0, delta1;  // limits of the two components
};

ImplosionTangent make_implosion_tangent(const WeylFace& face, const CMatrix& delta1,
                                        const CMatrix& slope,
                                        const std::vector<Eigen::Vector2d>& root_coeffs,
                                        double b);

BabyTangentSamples baby_tangent_samples(const ImplosionTangent& tangent, const Grid& grid);

/// Generator xi(t) itself, for diagnostics of the defining second-order ODE.
std::vector<CMatrix> baby_tangent_generator(const ImplosionTangent& tangent,
                                            const Grid& grid);

// ---------------------------------------------------------------------------
// Closed-form geometry of a stratum in (K x face)/[C,C] coordinates. Tangent
// coordinates are (v + vperp, w) with v, w in Z(c) and vperp in c_perp.
//
//   metric:   b <w,w'> + (1/b) <v,v'> + sum_alpha alpha <vperp_alpha, vperp'_alpha>
//   I:        (v + vperp, w) -> (-b w + I0 vperp, v / b)
//   omega:    <v1,w2> - <w1,v2> + <tau1, [vperp1, vperp2]>
//
// The metric and complex structure depend on b > 0; omega does not.
// ---------------------------------------------------------------------------

struct FaceTangent {
  CMatrix v;      // Z(c)
  CMatrix vperp;  // c_perp
  CMatrix w;      // Z(c)
};

class BabyGeometry {
 public:
  BabyGeometry(const WeylFace& face, double b);

  const WeylFace& face() const { return face_; }
  double b() const { return b_; }
  const std::vector<RootSpace>& roots() const { return roots_; }

  double metric(const FaceTangent& x, const FaceTangent& y) const;
  FaceTangent complex_structure(const FaceTangent& x) const;
  double symplectic(const FaceTangent& x, const FaceTangent& y) const;

  /// Per-root-space coordinates of a c_perp element.
  std::vector<Eigen::Vector2d> decompose_offblock(const CMatrix& vperp) const;
  CMatrix apply_i0(const CMatrix& vperp) const;

  void validate(const FaceTangent& x) const;

 private:
  WeylFace face_;
  double b_;
  std::vector<RootSpace> roots_;
};

inline BabyGeometry baby_geometry(const WeylFace& face, double b) {
  return BabyGeometry(face, b);
}

/// Closed-form squared norm of an implosion tangent:
/// b (|delta1|^2 + |slope|^2) + sum_alpha alpha |xi_alpha(0)|^2.
double implosion_tangent_norm2(const ImplosionTangent& tangent);

}  // namespace nahmlab

#endif
