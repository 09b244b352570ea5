#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qsb/su2.hpp"

namespace qsb {

// x^k for integer k >= 0 with 0^0 = 1. Used for the merged-exponent block
// weights r+^{N/2+m} r-^{N/2-m}, which stay exact at r = 0 and r = 1.
inline double ipow(double x, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

// Single-qubit mixed state (1 + r n.sigma)/2 with Bloch length r and unit
// direction n.
struct BlochState {
  double length = 0.0;
  Eigen::Vector3d direction = Eigen::Vector3d::UnitZ();

  BlochState(double r, const Eigen::Vector3d& n) : length(r) {
    if (!(r >= 0.0 && r <= 1.0))
      throw std::invalid_argument("BlochState: length outside [0,1]");
    const double norm = n.norm();
    if (!(norm > 1e-12) || !std::isfinite(norm))
      throw std::invalid_argument("BlochState: direction must be a nonzero finite vector");
    direction = n / norm;
  }

  static BlochState from_angles(double r, double theta, double phi) {
    return BlochState(r, Eigen::Vector3d(std::sin(theta) * std::cos(phi),
                                         std::sin(theta) * std::sin(phi), std::cos(theta)));
  }

  double theta() const { return std::acos(std::clamp(direction.z(), -1.0, 1.0)); }
  double phi() const { return std::atan2(direction.y(), direction.x()); }

  Eigen::Matrix2cd density_matrix() const {
    Eigen::Matrix2cd out;
    const double x = length * direction.x();
    const double y = length * direction.y();
    const double z = length * direction.z();
    out << Complex(1.0 + z, 0.0), Complex(x, -y), Complex(x, y), Complex(1.0 - z, 0.0);
    return 0.5 * out;
  }
};

// (r+, r-) = ((1+r)/2, (1-r)/2), the eigenvalues of the single-qubit state
inline std::pair<double, double> r_plus_minus(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("r_plus_minus: r outside [0,1]");
  return {0.5 * (1.0 + r), 0.5 * (1.0 - r)};
}

namespace detail {

inline void check_qubit_count(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("qubit count must be >= 1");
}

}  // namespace detail

// Eigenvalue of the spin-j block of rho^{⊗N} at weight m (in the rotated
// basis |j,m;n>): m_j r+^{N/2+m} r-^{N/2-m}, merged-exponent form.
inline double block_eigenvalue(int n_qubits, IrrepLabel j, int twice_m, double r) {
  detail::check_qubit_count(n_qubits);
  const auto [rp, rm] = r_plus_minus(r);
  const double w = static_cast<double>(multiplicity(n_qubits, j)) *
                   ipow(rp, (n_qubits + twice_m) / 2) * ipow(rm, (n_qubits - twice_m) / 2);
  return w < 1e-300 ? 0.0 : w;  // flush underflow
}

// Trace weights of the spin-j sectors of rho^{⊗N}; they sum to 1.
inline std::vector<std::pair<IrrepLabel, double>> block_weights(int n_qubits, double r) {
  detail::check_qubit_count(n_qubits);
  std::vector<std::pair<IrrepLabel, double>> out;
  for (IrrepLabel j : irrep_labels(n_qubits)) {
    double w = 0.0;
    for (int tm = -j.twice_j; tm <= j.twice_j; tm += 2) w += block_eigenvalue(n_qubits, j, tm, r);
    out.emplace_back(j, w);
  }
  return out;
}

// The list of spin-j blocks rho_j of N identically prepared qubits.
// rho^{⊗N} = ⊕_j rho_j ⊗ 1_{m_j}/m_j with
//   rho_j = m_j (r+ r-)^{N/2} sum_m (r+/r-)^m |j,m;n><j,m;n|.
struct BlockSpectrum {
  struct Block {
    IrrepLabel j;
    SpinMatrix rho;
  };
  int n_qubits = 0;
  std::vector<Block> blocks;
};

inline BlockSpectrum block_state(int n_qubits, const BlochState& state) {
  detail::check_qubit_count(n_qubits);
  BlockSpectrum out;
  out.n_qubits = n_qubits;
  const double theta = state.theta();
  const double phi = state.phi();
  for (IrrepLabel j : irrep_labels(n_qubits)) {
    const SpinMatrix basis = rotation_to_direction(j, theta, phi);
    Eigen::VectorXd eigs(j.dim());
    for (int a = 0; a < j.dim(); ++a)
      eigs(a) = block_eigenvalue(n_qubits, j, j.twice_m_at(a), state.length);
    SpinMatrix rho = basis * eigs.asDiagonal() * basis.adjoint();
    out.blocks.push_back({j, std::move(rho)});
  }
  return out;
}

}  // namespace qsb
