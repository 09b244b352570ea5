#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qsb/decomposition.hpp"
#include "qsb/quadrature.hpp"

// Independent brute-force constructions on the full 2^N-dimensional space and
// numerical quadrature of the estimation fidelities. Everything here is meant
// to validate the closed forms in protocols.hpp through a different route, so
// it favors direct definitions over shared shortcuts.
namespace qsb::oracle {

namespace detail {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k) out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
  return out;
}

// Embed a single-qubit operator at `site` of an N-qubit register.
// Basis: bit 0 of the index is qubit N-1; bit value 0 means spin up.
inline Eigen::MatrixXcd site_operator(const Eigen::Matrix2cd& op, int site, int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t bit = std::size_t{1} << (n_qubits - 1 - site);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    const int cbit = (col & bit) ? 1 : 0;
    for (int rbit = 0; rbit < 2; ++rbit) {
      const Complex v = op(rbit, cbit);
      if (v == Complex(0.0, 0.0)) continue;
      const std::size_t row = rbit ? (col | bit) : (col & ~bit);
      out(row, col) += v;
    }
  }
  return out;
}

inline Eigen::MatrixXcd total_spin(const Eigen::Matrix2cd& half_sigma, int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (int site = 0; site < n_qubits; ++site) out += site_operator(half_sigma, site, n_qubits);
  return out;
}

inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd s;
  s << 0, 1, 1, 0;
  return s;
}
inline Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd s;
  s << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return s;
}
inline Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd s;
  s << 1, 0, 0, -1;
  return s;
}

// Total angular momentum squared (sum_i sigma_i/2)^2; real symmetric.
inline Eigen::MatrixXd casimir_matrix(int n_qubits) {
  const Eigen::MatrixXcd jx = total_spin(0.5 * pauli_x(), n_qubits);
  const Eigen::MatrixXcd jy = total_spin(0.5 * pauli_y(), n_qubits);
  const Eigen::MatrixXcd jz = total_spin(0.5 * pauli_z(), n_qubits);
  const Eigen::MatrixXcd j2 = jx * jx + jy * jy + jz * jz;
  if (j2.imag().cwiseAbs().maxCoeff() > 1e-12)
    throw std::logic_error("casimir_matrix: unexpected imaginary part");
  return j2.real();
}

inline double binomial_d(int n, int k) {
  double c = 1.0;
  if (k > n - k) k = n - k;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace detail

// N-fold tensor power of the single-qubit density matrix. Memory-bounded to
// N <= 12 (a 4096 x 4096 complex matrix).
inline Eigen::MatrixXcd full_tensor_state(int n_qubits, const BlochState& state) {
  if (n_qubits < 1 || n_qubits > 12)
    throw std::invalid_argument("full_tensor_state: n_qubits outside [1,12]");
  Eigen::MatrixXcd out = state.density_matrix();
  for (int i = 1; i < n_qubits; ++i) out = detail::kron(out, state.density_matrix());
  return out;
}

struct CasimirBlock {
  IrrepLabel j;
  int multiplicity;          // rank / (2j+1)
  Eigen::MatrixXd projector; // onto the full spin-j sector
};

// Spectral decomposition of the total J^2 into eigenprojectors; eigenvalue
// j(j+1) identifies the sector. N <= 10 keeps the eigensolve tractable.
inline std::vector<CasimirBlock> casimir_decomposition(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 10)
    throw std::invalid_argument("casimir_decomposition: n_qubits outside [1,10]");
  const Eigen::MatrixXd j2 = detail::casimir_matrix(n_qubits);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j2);

  std::vector<CasimirBlock> out;
  Eigen::Index assigned = 0;
  for (IrrepLabel j : irrep_labels(n_qubits)) {
    const double eig = j.j() * (j.j() + 1.0);
    std::vector<Eigen::Index> members;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
      if (std::abs(es.eigenvalues()(k) - eig) < 1e-8) members.push_back(k);
    if (members.empty() || members.size() % j.dim() != 0)
      throw std::logic_error("casimir_decomposition: eigenvalue cluster has unexpected rank");
    Eigen::MatrixXd basis(j2.rows(), static_cast<Eigen::Index>(members.size()));
    for (std::size_t c = 0; c < members.size(); ++c) basis.col(c) = es.eigenvectors().col(members[c]);
    out.push_back({j, static_cast<int>(members.size()) / j.dim(), basis * basis.transpose()});
    assigned += static_cast<Eigen::Index>(members.size());
  }
  if (assigned != j2.rows())
    throw std::logic_error("casimir_decomposition: eigenvalues left unassigned");
  return out;
}

struct SchurBasis {
  IrrepLabel j;
  int multiplicity;
  // Isometry from H_j ⊗ C^{m_j} into the full space; column (a * m_j + alpha)
  // holds |j, m_a; alpha> with m_a = j - a.
  Eigen::MatrixXd isometry;
};

// Orthonormal Schur bases built independently of the block formulas: highest
// weight vectors come from the joint (J^2, Jz) eigenproblem, the rest of each
// tower from repeated total lowering.
inline std::vector<SchurBasis> schur_isometries(int n_qubits) {
  const Eigen::MatrixXd j2 = detail::casimir_matrix(n_qubits);
  const Eigen::MatrixXd jz = detail::total_spin(0.5 * detail::pauli_z(), n_qubits).real();
  Eigen::Matrix2cd lower;
  lower << 0, 0, 1, 0;  // sigma_- : up -> down
  const Eigen::MatrixXd jm = detail::total_spin(lower, n_qubits).real();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j2);
  std::vector<SchurBasis> out;
  for (IrrepLabel j : irrep_labels(n_qubits)) {
    const double eig = j.j() * (j.j() + 1.0);
    std::vector<Eigen::Index> members;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
      if (std::abs(es.eigenvalues()(k) - eig) < 1e-8) members.push_back(k);
    Eigen::MatrixXd sector(j2.rows(), static_cast<Eigen::Index>(members.size()));
    for (std::size_t c = 0; c < members.size(); ++c) sector.col(c) = es.eigenvectors().col(members[c]);

    // highest-weight space: Jz restricted to the sector has eigenvalue j there
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esz(sector.transpose() * jz * sector);
    const int mult = static_cast<int>(members.size()) / j.dim();
    Eigen::MatrixXd tops(j2.rows(), mult);
    int found = 0;
    for (Eigen::Index k = 0; k < esz.eigenvalues().size(); ++k) {
      if (std::abs(esz.eigenvalues()(k) - j.j()) < 1e-8) {
        if (found == mult) throw std::logic_error("schur_isometries: excess highest-weight vectors");
        tops.col(found++) = sector * esz.eigenvectors().col(k);
      }
    }
    if (found != mult) throw std::logic_error("schur_isometries: missing highest-weight vectors");

    Eigen::MatrixXd iso(j2.rows(), static_cast<Eigen::Index>(j.dim()) * mult);
    Eigen::MatrixXd current = tops;
    for (int a = 0; a < j.dim(); ++a) {
      for (int alpha = 0; alpha < mult; ++alpha) iso.col(static_cast<Eigen::Index>(a) * mult + alpha) = current.col(alpha);
      if (a + 1 < j.dim()) {
        const double m = j.m_at(a);
        current = (jm * current) / std::sqrt(j.j() * (j.j() + 1.0) - m * (m - 1.0));
      }
    }
    out.push_back({j, mult, std::move(iso)});
  }
  return out;
}

// Rebuild rho^{⊗N} as ⊕_j rho_j ⊗ 1/m_j through the Schur isometries.
inline Eigen::MatrixXcd reassemble_full_state(const BlockSpectrum& spectrum,
                                              const std::vector<SchurBasis>& bases) {
  if (spectrum.blocks.size() != bases.size())
    throw std::invalid_argument("reassemble_full_state: sector lists differ");
  const Eigen::Index dim = bases.front().isometry.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t b = 0; b < bases.size(); ++b) {
    if (!(spectrum.blocks[b].j == bases[b].j))
      throw std::invalid_argument("reassemble_full_state: sector labels differ");
    const int mult = bases[b].multiplicity;
    const Eigen::MatrixXcd embedded = detail::kron(
        spectrum.blocks[b].rho, Eigen::MatrixXcd::Identity(mult, mult) / static_cast<double>(mult));
    const Eigen::MatrixXcd iso = bases[b].isometry.cast<Complex>();
    out += iso * embedded * iso.adjoint();
  }
  return out;
}

// Probability density (w.r.t. the normalized sphere measure) of estimating a
// direction with polar angle theta-hat when the input points along +z:
//   p = sum_j (2j+1) sum_m lambda_{j,m} |<j,j;n-hat|j,m;k>|^2,
// with the overlap in its closed binomial form.
inline double direction_posterior(int n_qubits, double r, double cos_theta_hat) {
  qsb::detail::check_qubit_count(n_qubits);
  const double up = 0.5 * (1.0 + cos_theta_hat);    // cos^2(theta/2)
  const double down = 0.5 * (1.0 - cos_theta_hat);  // sin^2(theta/2)
  double p = 0.0;
  for (IrrepLabel j : irrep_labels(n_qubits)) {
    for (int tm = -j.twice_j; tm <= j.twice_j; tm += 2) {
      const double overlap = detail::binomial_d(j.twice_j, (j.twice_j - tm) / 2) *
                             ipow(up, (j.twice_j + tm) / 2) * ipow(down, (j.twice_j - tm) / 2);
      p += j.dim() * block_eigenvalue(n_qubits, j, tm, r) * overlap;
    }
  }
  return p;
}

// Same density through rotated-eigenstate overlaps; exposes the (absent)
// azimuthal dependence so the symmetry can be checked literally, and
// cross-checks the binomial route.
inline double direction_posterior(int n_qubits, double r, double theta_hat, double phi_hat) {
  qsb::detail::check_qubit_count(n_qubits);
  double p = 0.0;
  for (IrrepLabel j : irrep_labels(n_qubits)) {
    const SpinMatrix rot = rotation_to_direction(j, theta_hat, phi_hat);
    for (int a = 0; a < j.dim(); ++a) {
      p += j.dim() * block_eigenvalue(n_qubits, j, j.twice_m_at(a), r) * std::norm(rot(a, 0));
    }
  }
  return p;
}

// Estimation fidelity by direct quadrature of the Born-rule integral
// F = ∫ p(n-hat) (1 + cos theta-hat)/2 over the sphere.
inline double quadrature_universal_fidelity(int n_qubits, double r, const GaussLegendreRule& rule) {
  double f = 0.0;
  for (int k = 0; k < rule.count(); ++k) {
    const double c = rule.nodes(k);
    f += 0.5 * rule.weights(k) * direction_posterior(n_qubits, r, c) * 0.5 * (1.0 + c);
  }
  return f;
}

// Mean output Bloch vector ∫ p(n-hat) n-hat of the measure-and-prepare scheme,
// via the full two-angle quadrature (Gauss-Legendre x uniform azimuth).
inline Eigen::Vector3d quadrature_output_bloch(int n_qubits, double r, const GaussLegendreRule& rule,
                                               int phi_points = 512) {
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (int k = 0; k < rule.count(); ++k) {
    const double c = rule.nodes(k);
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double pd = direction_posterior(n_qubits, r, c);
    double cx = 0.0, cy = 0.0;
    for (int l = 0; l < phi_points; ++l) {
      const double phi = 2.0 * M_PI * l / phi_points;
      cx += std::cos(phi);
      cy += std::sin(phi);
    }
    const double wk = 0.5 * rule.weights(k) * pd;
    out.x() += wk * s * cx / phi_points;
    out.y() += wk * s * cy / phi_points;
    out.z() += wk * c;
  }
  return out;
}

// Conditional density p(phi-hat | phi = 0) of optimal phase estimation on N
// equatorial copies, w.r.t. d(phi-hat)/2pi. The POVM seed is the standard
// rank-one phase seed ⊕_j |e_j><e_j| with |e_j> = sum_n |j,n;k>.
class PhasePosterior {
 public:
  PhasePosterior(int n_qubits, double r) {
    qsb::detail::check_qubit_count(n_qubits);
    for (IrrepLabel j : irrep_labels(n_qubits)) {
      Block block;
      block.z_weights.resize(j.dim());
      for (int a = 0; a < j.dim(); ++a) block.z_weights(a) = j.m_at(a);
      Eigen::SelfAdjointEigenSolver<SpinMatrix> es(jx_matrix(j));
      block.x_basis = es.eigenvectors();
      block.lambdas.resize(j.dim());
      for (int k = 0; k < j.dim(); ++k) {
        const int tm = static_cast<int>(std::lround(2.0 * es.eigenvalues()(k)));
        block.lambdas(k) = block_eigenvalue(n_qubits, j, tm, r);
      }
      blocks_.push_back(std::move(block));
    }
  }

  double operator()(double phi_hat) const {
    double p = 0.0;
    for (const Block& block : blocks_) {
      const int dim = static_cast<int>(block.z_weights.size());
      Eigen::RowVectorXcd seed(dim);
      for (int a = 0; a < dim; ++a) seed(a) = std::exp(Complex(0.0, -phi_hat * block.z_weights(a)));
      const Eigen::RowVectorXcd amps = seed * block.x_basis;
      for (int k = 0; k < dim; ++k) p += block.lambdas(k) * std::norm(amps(k));
    }
    return p;
  }

 private:
  struct Block {
    Eigen::VectorXd z_weights;   // m values of the z basis
    SpinMatrix x_basis;          // columns: eigenvectors of Jx
    Eigen::VectorXd lambdas;     // block eigenvalues keyed to those columns
  };
  std::vector<Block> blocks_;
};

// Phase-estimation fidelity ∫ d(phi-hat)/2pi p(phi-hat|0) (1+cos phi-hat)/2 by
// the uniform periodic rule, exact for trigonometric polynomials of degree
// below the node count.
inline double quadrature_phase_fidelity(int n_qubits, double r, int phi_points = 512) {
  if (phi_points < 2) throw std::invalid_argument("quadrature_phase_fidelity: too few nodes");
  const PhasePosterior posterior(n_qubits, r);
  double f = 0.0;
  for (int l = 0; l < phi_points; ++l) {
    const double phi = 2.0 * M_PI * l / phi_points;
    f += posterior(phi) * 0.5 * (1.0 + std::cos(phi));
  }
  return f / phi_points;
}

}  // namespace qsb::oracle
