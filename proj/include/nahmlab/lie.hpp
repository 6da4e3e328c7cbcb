#ifndef NAHMLAB_LIE_HPP
#define NAHMLAB_LIE_HPP

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

namespace nahmlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

// A point of su(n): traceless skew-Hermitian complex matrix. We keep the
// storage as a plain Eigen matrix and validate membership where contracts
// require it.
using LieElement = CMatrix;

bool is_su(const CMatrix& x, double tol = 1e-12);
void require_su(const CMatrix& x, const char* what);
void require_same_dim(const CMatrix& x, const CMatrix& y, const char* what);

/// Commutator xy - yx. Accepts arbitrary Eigen expressions.
template <typename A, typename B>
CMatrix bracket(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  return x * y - y * x;
}

/// Bi-invariant inner product <x, y> = -tr(xy). Positive definite on su(n),
/// and equal to the Frobenius pairing Re tr(x y*) there.
template <typename A, typename B>
double inner(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  return -(x.derived() * y.derived()).trace().real();
}

template <typename A>
double ip_norm(const Eigen::MatrixBase<A>& x) {
  double s = inner(x, x);
  return s > 0 ? std::sqrt(s) : 0.0;
}

// ---------------------------------------------------------------------------
// Centralizer strata.
//
// For a commuting triple tau of diagonal imaginary matrices, the common
// centralizer C is a block subgroup of SU(n); its Lie algebra c splits the
// ambient algebra orthogonally as
//
//   su(n) = Z(c) + [c,c] + c_perp,
//
// with Z(c) the block-scalar imaginary diagonals, [c,c] the per-block
// traceless part and c_perp the off-block part.
// ---------------------------------------------------------------------------

struct Stratum {
  int n = 0;
  std::array<CMatrix, 3> tau;  // diagonal imaginary, pairwise commuting
  std::vector<int> blocks;     // ordered block sizes, sum = n
  double zeta = 0;             // stability constraint from Hessian/Casimir spectra
  double eta = 0;              // slowest exponential rate; +inf when c_perp = 0

  bool in_center(const CMatrix& x, double tol = 1e-10) const;
  bool in_commutator(const CMatrix& x, double tol = 1e-10) const;
  bool in_centralizer(const CMatrix& x, double tol = 1e-10) const;
};

/// Builds the stratum of a commuting diagonal triple: the coarsest contiguous
/// block partition under which every tau_i is block-scalar. Diagonal entries
/// closer than merge_tol are treated as equal.
Stratum centralizer_blocks(const std::array<CMatrix, 3>& tau,
                           double merge_tol = 1e-9);

struct StratumSplit {
  CMatrix d0;  // Z(c) component
  CMatrix d1;  // [c,c] component
  CMatrix h;   // c_perp component
};

StratumSplit project_stratum(const CMatrix& x, const Stratum& s);
CMatrix project_center(const CMatrix& x, const Stratum& s);
CMatrix project_commutator(const CMatrix& x, const Stratum& s);
CMatrix project_offblock(const CMatrix& x, const Stratum& s);

/// Orthonormal bases (w.r.t. inner) of the three pieces. The centralizer
/// basis is the concatenation of the center and commutator bases.
std::vector<CMatrix> center_basis(const Stratum& s);
std::vector<CMatrix> commutator_basis(const Stratum& s);
std::vector<CMatrix> centralizer_basis(const Stratum& s);
int centralizer_dim(const Stratum& s);

// ---------------------------------------------------------------------------
// su(2)-triples: sigma with [sigma_i, sigma_j] = -2 sigma_k for (ijk) an even
// permutation of (123); equivalently the image of a standard su(2) basis
// under a Lie algebra homomorphism. They live in [c,c].
// ---------------------------------------------------------------------------

struct Su2Triple {
  std::array<CMatrix, 3> sigma;
};

/// Largest entrywise violation of the bracket relations.
double su2_bracket_residual(const Su2Triple& t);

/// Block-diagonal triple assembled from irreducible su(2) representations:
/// parts[b] partitions block b into irrep dimensions. The all-ones partition
/// gives sigma = 0.
Su2Triple su2_triple_from_partition(const Stratum& s,
                                    const std::vector<std::vector<int>>& parts);

/// Same, for the full-algebra stratum (tau = 0, one block).
Su2Triple su2_triple_from_partition(int n, const std::vector<int>& partition);

void require_su2_triple(const Su2Triple& t, const Stratum& s, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Root spaces of ad(tau_1) on c_perp. Each off-block matrix position (p,q)
// spans a two-dimensional real subspace on which
//
//   [tau_1, v] = alpha_value * I0(v),   I0^2 = -1.
// ---------------------------------------------------------------------------

struct RootSpace {
  double alpha_value = 0;          // positive eigenvalue scale of ad(tau_1)
  std::array<CMatrix, 2> basis;    // orthonormal w.r.t. inner
  Eigen::Matrix2d i0;              // I0 in basis coordinates
  int row = 0, col = 0;            // generating matrix position, row < col
};

/// Root spaces ordered by decreasing alpha_value, position-lexicographic on
/// ties. Throws when ad(tau_1) vanishes on an off-block position (the input
/// is then more degenerate than the stratum claims).
std::vector<RootSpace> root_spaces(const CMatrix& tau1, const Stratum& s);

// ---------------------------------------------------------------------------
// Chern-Simons stability data on c.
// ---------------------------------------------------------------------------

/// phi(xi) = sum <xi_i, xi_i> + <xi_1, [xi_2, xi_3]>; its critical points in
/// c^3 are exactly the su(2)-triples.
double chern_simons(const std::array<CMatrix, 3>& xi, const Stratum& s);

/// Hessian of phi at sigma, as a bilinear form on c^3.
double chern_simons_hessian(const Su2Triple& sigma,
                            const std::array<CMatrix, 3>& xi,
                            const std::array<CMatrix, 3>& psi);

struct StabilityConstants {
  Eigen::VectorXd hess_spectrum;     // Hess(phi)_sigma on c^3, ascending
  Eigen::VectorXd casimir_spectrum;  // -sum ad(sigma_i)^2 on c, ascending
  double zeta_bound = 0;             // min over both of the smallest positive eigenvalue
};

StabilityConstants stability_constants(const Su2Triple& sigma, const Stratum& s);

// ---------------------------------------------------------------------------
// Group-level helpers shared by the gauge machinery.
// ---------------------------------------------------------------------------

/// exp(xi) for skew-Hermitian xi, through the spectral decomposition of the
/// Hermitian matrix -i xi. Exactly unitary up to roundoff.
CMatrix exp_su(const CMatrix& xi);

/// Principal logarithm of a unitary matrix (Schur-based; requires no
/// eigenvalue at -1 within tol for a well-conditioned branch).
CMatrix unitary_log(const CMatrix& k);

/// exp(h) for Hermitian h; positive definite result.
CMatrix exp_hermitian(const CMatrix& h);

}  // namespace nahmlab

#endif
