#include "nahmlab/lie.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace nahmlab {

bool is_su(const CMatrix& x, double tol) {
  if (x.rows() != x.cols()) return false;
  if ((x + x.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(x.trace()) < tol;
}

void require_su(const CMatrix& x, const char* what) {
  if (!is_su(x, 1e-10))
    throw std::invalid_argument(std::string(what) +
                                ": not a traceless skew-Hermitian matrix");
}

void require_same_dim(const CMatrix& x, const CMatrix& y, const char* what) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

// --- strata -----------------------------------------------------------------

namespace {

void require_diagonal_triple(const std::array<CMatrix, 3>& tau) {
  const int n = static_cast<int>(tau[0].rows());
  for (const auto& t : tau) {
    if (t.rows() != n || t.cols() != n)
      throw std::invalid_argument("centralizer_blocks: dimension mismatch");
    require_su(t, "centralizer_blocks");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i != j && std::abs(t(i, j)) > 1e-12)
          throw std::invalid_argument("centralizer_blocks: tau must be diagonal");
        if (i == j && std::abs(t(i, i).real()) > 1e-12)
          throw std::invalid_argument("centralizer_blocks: tau must be imaginary");
      }
  }
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      if (bracket(tau[a], tau[b]).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("centralizer_blocks: tau must commute");
}

// Offsets of block starts; blocks.size()+1 entries.
std::vector<int> block_offsets(const std::vector<int>& blocks) {
  std::vector<int> off(1, 0);
  for (int b : blocks) off.push_back(off.back() + b);
  return off;
}

}  // namespace

bool Stratum::in_center(const CMatrix& x, double tol) const {
  return (x - project_center(x, *this)).cwiseAbs().maxCoeff() <= tol;
}

bool Stratum::in_commutator(const CMatrix& x, double tol) const {
  return (x - project_commutator(x, *this)).cwiseAbs().maxCoeff() <= tol;
}

bool Stratum::in_centralizer(const CMatrix& x, double tol) const {
  return project_offblock(x, *this).cwiseAbs().maxCoeff() <= tol;
}

Stratum centralizer_blocks(const std::array<CMatrix, 3>& tau, double merge_tol) {
  require_diagonal_triple(tau);
  const int n = static_cast<int>(tau[0].rows());

  Stratum s;
  s.n = n;
  s.tau = tau;

  // Coarsest contiguous grouping under which the simultaneous diagonal
  // triple is constant. Non-adjacent repeats would make the blocks
  // non-contiguous, which the block-diagonal representation cannot express.
  auto triple_at = [&](int i) {
    return Eigen::Vector3d(tau[0](i, i).imag(), tau[1](i, i).imag(),
                           tau[2](i, i).imag());
  };
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || (triple_at(i) - triple_at(i - 1)).cwiseAbs().maxCoeff() >
                      merge_tol) {
      s.blocks.push_back(i - start);
      start = i;
    }
  }
  auto off = block_offsets(s.blocks);
  for (size_t b = 0; b + 1 < s.blocks.size(); ++b) {
    for (size_t b2 = b + 1; b2 < s.blocks.size(); ++b2) {
      if ((triple_at(off[b]) - triple_at(off[b2])).cwiseAbs().maxCoeff() <=
          merge_tol)
        throw std::invalid_argument(
            "centralizer_blocks: equal diagonal triples must be contiguous; "
            "sort the triple into a chamber first");
    }
  }

  // Slowest exponential rate: smallest eigenvalue of -sum ad(tau_i)^2 on
  // c_perp, computed directly from the diagonal gaps.
  double eta = std::numeric_limits<double>::infinity();
  for (size_t b = 0; b + 1 < s.blocks.size(); ++b)
    for (size_t b2 = b + 1; b2 < s.blocks.size(); ++b2) {
      double g = 0;
      for (int a = 0; a < 3; ++a) {
        double d = tau[a](off[b], off[b]).imag() - tau[a](off[b2], off[b2]).imag();
        g += d * d;
      }
      eta = std::min(eta, g);
    }
  s.eta = eta;

  // Stability constraint: minimum of the spectra bounds over the finitely
  // many standard su(2)-triples the blocks admit.
  std::vector<std::vector<std::vector<int>>> partition_lists;
  for (int k : s.blocks) {
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    // partitions of k in non-increasing order
    std::function<void(int, int)> rec = [&](int rest, int maxpart) {
      if (rest == 0) {
        parts.push_back(cur);
        return;
      }
      for (int p = std::min(rest, maxpart); p >= 1; --p) {
        cur.push_back(p);
        rec(rest - p, p);
        cur.pop_back();
      }
    };
    rec(k, k);
    partition_lists.push_back(std::move(parts));
  }
  double zeta = std::numeric_limits<double>::infinity();
  std::vector<size_t> idx(s.blocks.size(), 0);
  while (true) {
    std::vector<std::vector<int>> choice;
    for (size_t b = 0; b < s.blocks.size(); ++b)
      choice.push_back(partition_lists[b][idx[b]]);
    Su2Triple sig = su2_triple_from_partition(s, choice);
    zeta = std::min(zeta, stability_constants(sig, s).zeta_bound);
    size_t b = 0;
    for (; b < idx.size(); ++b) {
      if (++idx[b] < partition_lists[b].size()) break;
      idx[b] = 0;
    }
    if (b == idx.size()) break;
  }
  s.zeta = zeta;
  return s;
}

CMatrix project_center(const CMatrix& x, const Stratum& s) {
  CMatrix out = CMatrix::Zero(s.n, s.n);
  auto off = block_offsets(s.blocks);
  for (size_t b = 0; b < s.blocks.size(); ++b) {
    const int k = s.blocks[b];
    Complex avg = x.block(off[b], off[b], k, k).trace() / double(k);
    for (int i = 0; i < k; ++i) out(off[b] + i, off[b] + i) = avg;
  }
  return out;
}

CMatrix project_commutator(const CMatrix& x, const Stratum& s) {
  CMatrix out = CMatrix::Zero(s.n, s.n);
  auto off = block_offsets(s.blocks);
  for (size_t b = 0; b < s.blocks.size(); ++b) {
    const int k = s.blocks[b];
    CMatrix blk = x.block(off[b], off[b], k, k);
    blk -= (blk.trace() / double(k)) * CMatrix::Identity(k, k);
    out.block(off[b], off[b], k, k) = blk;
  }
  return out;
}

CMatrix project_offblock(const CMatrix& x, const Stratum& s) {
  CMatrix out = x;
  auto off = block_offsets(s.blocks);
  for (size_t b = 0; b < s.blocks.size(); ++b)
    out.block(off[b], off[b], s.blocks[b], s.blocks[b]).setZero();
  return out;
}

StratumSplit project_stratum(const CMatrix& x, const Stratum& s) {
  if (x.rows() != s.n || x.cols() != s.n)
    throw std::invalid_argument("project_stratum: dimension mismatch");
  StratumSplit sp;
  sp.d0 = project_center(x, s);
  sp.d1 = project_commutator(x, s);
  sp.h = project_offblock(x, s);
  return sp;
}

std::vector<CMatrix> center_basis(const Stratum& s) {
  // Block-scalar imaginary diagonals of total trace zero: Gram-Schmidt over
  // the m-1 differences of normalized block indicators.
  std::vector<CMatrix> out;
  const size_t m = s.blocks.size();
  if (m < 2) return out;
  auto off = block_offsets(s.blocks);
  std::vector<Eigen::VectorXd> raw;
  for (size_t b = 0; b + 1 < m; ++b) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(s.n);
    for (int i = 0; i < s.blocks[b]; ++i) v[off[b] + i] = 1.0 / s.blocks[b];
    for (int i = 0; i < s.blocks[b + 1]; ++i)
      v[off[b + 1] + i] = -1.0 / s.blocks[b + 1];
    raw.push_back(v);
  }
  std::vector<Eigen::VectorXd> ortho;
  for (auto v : raw) {
    for (const auto& u : ortho) v -= u.dot(v) * u;
    v.normalize();
    ortho.push_back(v);
  }
  for (const auto& v : ortho) {
    CMatrix e = CMatrix::Zero(s.n, s.n);
    for (int i = 0; i < s.n; ++i) e(i, i) = Complex(0, v[i]);
    out.push_back(e);
  }
  return out;
}

std::vector<CMatrix> commutator_basis(const Stratum& s) {
  std::vector<CMatrix> out;
  auto off = block_offsets(s.blocks);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (size_t b = 0; b < s.blocks.size(); ++b) {
    const int k = s.blocks[b], o = off[b];
    // diagonal traceless within the block
    for (int j = 1; j < k; ++j) {
      CMatrix e = CMatrix::Zero(s.n, s.n);
      double norm = std::sqrt(double(j) * (j + 1));
      for (int i = 0; i < j; ++i) e(o + i, o + i) = Complex(0, 1.0 / norm);
      e(o + j, o + j) = Complex(0, -double(j) / norm);
      out.push_back(e);
    }
    // off-diagonal pairs within the block
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) {
        CMatrix a = CMatrix::Zero(s.n, s.n);
        a(o + p, o + q) = 1;
        a(o + q, o + p) = -1;
        out.push_back(a * inv_sqrt2);
        CMatrix c = CMatrix::Zero(s.n, s.n);
        c(o + p, o + q) = Complex(0, 1);
        c(o + q, o + p) = Complex(0, 1);
        out.push_back(c * inv_sqrt2);
      }
  }
  return out;
}

std::vector<CMatrix> centralizer_basis(const Stratum& s) {
  std::vector<CMatrix> out = center_basis(s);
  auto d1 = commutator_basis(s);
  out.insert(out.end(), d1.begin(), d1.end());
  return out;
}

int centralizer_dim(const Stratum& s) {
  int d = -1;
  for (int k : s.blocks) d += k * k;
  return d;
}

// --- su(2)-triples -----------------------------------------------------------

double su2_bracket_residual(const Su2Triple& t) {
  double r = 0;
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    r = std::max(r, (bracket(t.sigma[i], t.sigma[j]) + 2.0 * t.sigma[k])
                        .cwiseAbs()
                        .maxCoeff());
  }
  return r;
}

namespace {

// Irreducible representation of dimension m of the standard basis e_a with
// [e1, e2] = -2 e3 (cyclically): e_a = i * Pauli_a in the defining case m=2.
std::array<CMatrix, 3> su2_irrep(int m) {
  CMatrix ladder_up = CMatrix::Zero(m, m);  // raising operator
  for (int k = 1; k < m; ++k)
    ladder_up(k - 1, k) = std::sqrt(double(k) * (m - k));
  CMatrix ladder_dn = ladder_up.adjoint();
  CMatrix h = CMatrix::Zero(m, m);
  for (int k = 0; k < m; ++k) h(k, k) = double(m - 1 - 2 * k);
  std::array<CMatrix, 3> e;
  e[0] = Complex(0, 1) * h;
  e[1] = Complex(0, 1) * (ladder_up + ladder_dn);
  e[2] = ladder_up - ladder_dn;
  return e;
}

}  // namespace

Su2Triple su2_triple_from_partition(const Stratum& s,
                                    const std::vector<std::vector<int>>& parts) {
  if (parts.size() != s.blocks.size())
    throw std::invalid_argument("su2_triple_from_partition: one partition per block");
  Su2Triple t;
  for (auto& m : t.sigma) m = CMatrix::Zero(s.n, s.n);
  auto off = block_offsets(s.blocks);
  for (size_t b = 0; b < parts.size(); ++b) {
    int sum = 0;
    for (int p : parts[b]) sum += p;
    if (sum != s.blocks[b])
      throw std::invalid_argument(
          "su2_triple_from_partition: partition does not sum to block size");
    int o = off[b];
    for (int p : parts[b]) {
      auto e = su2_irrep(p);
      for (int a = 0; a < 3; ++a) t.sigma[a].block(o, o, p, p) = e[a];
      o += p;
    }
  }
  return t;
}

Su2Triple su2_triple_from_partition(int n, const std::vector<int>& partition) {
  Stratum s;
  s.n = n;
  for (auto& m : s.tau) m = CMatrix::Zero(n, n);
  s.blocks = {n};
  return su2_triple_from_partition(s, {partition});
}

void require_su2_triple(const Su2Triple& t, const Stratum& s, double tol) {
  if (su2_bracket_residual(t) > tol)
    throw std::invalid_argument("su(2)-triple: bracket relations violated");
  for (const auto& m : t.sigma)
    if (!s.in_commutator(m, tol))
      throw std::invalid_argument("su(2)-triple: component outside [c,c]");
}

// --- root spaces --------------------------------------------------------------

std::vector<RootSpace> root_spaces(const CMatrix& tau1, const Stratum& s) {
  if (tau1.rows() != s.n)
    throw std::invalid_argument("root_spaces: dimension mismatch");
  auto off = block_offsets(s.blocks);
  std::vector<int> block_of(s.n);
  for (size_t b = 0; b < s.blocks.size(); ++b)
    for (int i = 0; i < s.blocks[b]; ++i) block_of[off[b] + i] = int(b);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<RootSpace> out;
  for (int p = 0; p < s.n; ++p)
    for (int q = p + 1; q < s.n; ++q) {
      if (block_of[p] == block_of[q]) continue;
      double gap = tau1(p, p).imag() - tau1(q, q).imag();
      if (std::abs(gap) < 1e-12)
        throw std::invalid_argument(
            "root_spaces: ad(tau_1) vanishes on an off-block position; "
            "the stratum is inconsistent with tau_1");
      RootSpace rs;
      rs.alpha_value = std::abs(gap);
      rs.row = p;
      rs.col = q;
      CMatrix a = CMatrix::Zero(s.n, s.n);
      a(p, q) = 1;
      a(q, p) = -1;
      CMatrix c = CMatrix::Zero(s.n, s.n);
      c(p, q) = Complex(0, 1);
      c(q, p) = Complex(0, 1);
      rs.basis = {a * inv_sqrt2, c * inv_sqrt2};
      // [tau1, a] = gap * c and [tau1, c] = -gap * a, so I0 flips the basis
      // with the sign of the gap.
      double sgn = gap > 0 ? 1.0 : -1.0;
      rs.i0 << 0, -sgn, sgn, 0;
      out.push_back(std::move(rs));
    }
  std::stable_sort(out.begin(), out.end(), [](const RootSpace& x, const RootSpace& y) {
    if (x.alpha_value != y.alpha_value) return x.alpha_value > y.alpha_value;
    if (x.row != y.row) return x.row < y.row;
    return x.col < y.col;
  });
  return out;
}

// --- Chern-Simons stability data ----------------------------------------------

double chern_simons(const std::array<CMatrix, 3>& xi, const Stratum& s) {
  for (const auto& m : xi)
    if (!s.in_centralizer(m, 1e-10))
      throw std::invalid_argument("chern_simons: component outside c");
  double v = 0;
  for (const auto& m : xi) v += inner(m, m);
  return v + inner(xi[0], bracket(xi[1], xi[2]));
}

double chern_simons_hessian(const Su2Triple& sigma,
                            const std::array<CMatrix, 3>& xi,
                            const std::array<CMatrix, 3>& psi) {
  const auto& s = sigma.sigma;
  return inner(xi[0], 2.0 * psi[0] - bracket(s[2], psi[1]) + bracket(s[1], psi[2])) +
         inner(xi[1], 2.0 * psi[1] + bracket(s[2], psi[0]) - bracket(s[0], psi[2])) +
         inner(xi[2], 2.0 * psi[2] - bracket(s[1], psi[0]) + bracket(s[0], psi[1]));
}

StabilityConstants stability_constants(const Su2Triple& sigma, const Stratum& s) {
  require_su2_triple(sigma, s);
  auto basis = centralizer_basis(s);
  const int d = static_cast<int>(basis.size());

  // Hessian of phi at sigma in an orthonormal basis of c^3.
  Eigen::MatrixXd hess(3 * d, 3 * d);
  auto op = [&](const std::array<CMatrix, 3>& psi) {
    std::array<CMatrix, 3> out;
    const auto& sg = sigma.sigma;
    out[0] = 2.0 * psi[0] - bracket(sg[2], psi[1]) + bracket(sg[1], psi[2]);
    out[1] = 2.0 * psi[1] + bracket(sg[2], psi[0]) - bracket(sg[0], psi[2]);
    out[2] = 2.0 * psi[2] - bracket(sg[1], psi[0]) + bracket(sg[0], psi[1]);
    return out;
  };
  CMatrix zero = CMatrix::Zero(s.n, s.n);
  for (int slot = 0; slot < 3; ++slot)
    for (int b = 0; b < d; ++b) {
      std::array<CMatrix, 3> psi = {zero, zero, zero};
      psi[slot] = basis[b];
      auto img = op(psi);
      for (int slot2 = 0; slot2 < 3; ++slot2)
        for (int a = 0; a < d; ++a)
          hess(slot2 * d + a, slot * d + b) = inner(basis[a], img[slot2]);
    }

  Eigen::MatrixXd cas(d, d);
  for (int b = 0; b < d; ++b) {
    CMatrix img = zero;
    for (int a = 0; a < 3; ++a)
      img -= bracket(sigma.sigma[a], bracket(sigma.sigma[a], basis[b]));
    for (int a = 0; a < d; ++a) cas(a, b) = inner(basis[a], img);
  }

  StabilityConstants out;
  out.hess_spectrum =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (hess + hess.transpose()))
          .eigenvalues();
  out.casimir_spectrum =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (cas + cas.transpose()))
          .eigenvalues();

  auto first_positive = [](const Eigen::VectorXd& v) {
    for (int i = 0; i < v.size(); ++i)
      if (v[i] > 1e-9) return v[i];
    return std::numeric_limits<double>::infinity();
  };
  double hp = first_positive(out.hess_spectrum);
  double cp = first_positive(out.casimir_spectrum);
  if (!std::isfinite(hp) && !std::isfinite(cp))
    throw std::runtime_error("stability_constants: no positive eigenvalue");
  out.zeta_bound = std::min(hp, cp);
  return out;
}

// --- group-level helpers --------------------------------------------------------

CMatrix exp_su(const CMatrix& xi) {
  CMatrix h = Complex(0, -1) * xi;  // Hermitian
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  Eigen::VectorXcd phases(h.rows());
  for (int i = 0; i < h.rows(); ++i)
    phases[i] = std::exp(Complex(0, es.eigenvalues()[i]));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix unitary_log(const CMatrix& k) {
  Eigen::ComplexSchur<CMatrix> schur(k);
  const CMatrix& t = schur.matrixT();
  if (t.cwiseAbs().maxCoeff() > 0 &&
      (t - CMatrix(t.diagonal().asDiagonal())).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("unitary_log: input is not normal");
  Eigen::VectorXcd logs(k.rows());
  for (int i = 0; i < k.rows(); ++i) {
    Complex lambda = t(i, i);
    logs[i] = Complex(0, std::arg(lambda));
  }
  return schur.matrixU() * logs.asDiagonal() * schur.matrixU().adjoint();
}

CMatrix exp_hermitian(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues();
  Eigen::VectorXcd ex(h.rows());
  for (int i = 0; i < h.rows(); ++i) ex[i] = std::exp(ev[i]);
  return es.eigenvectors() * ex.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace nahmlab
