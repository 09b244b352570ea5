#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace qsb {

using Complex = std::complex<double>;

// Dense operator on a (2j+1)-dimensional irrep space.
// Basis convention throughout: z-eigenstates |j,m> ordered m = j, j-1, ..., -j,
// so row/column index a holds m = j - a.
using SpinMatrix = Eigen::MatrixXcd;

// Total-angular-momentum label. Stores 2j so half-integer labels stay exact.
struct IrrepLabel {
  int twice_j = 0;

  explicit IrrepLabel(int two_j) : twice_j(two_j) {
    if (two_j < 0) throw std::invalid_argument("IrrepLabel: 2j must be non-negative");
  }

  int dim() const noexcept { return twice_j + 1; }
  double j() const noexcept { return 0.5 * twice_j; }

  // m value stored at basis index a (a = 0 is the highest weight m = j)
  double m_at(int a) const noexcept { return 0.5 * (twice_j - 2 * a); }
  int twice_m_at(int a) const noexcept { return twice_j - 2 * a; }

  friend bool operator==(const IrrepLabel&, const IrrepLabel&) = default;
};

// All spin labels appearing in the Clebsch-Gordan series of (C^2)^{⊗N}:
// 2j = N mod 2, N mod 2 + 2, ..., N.
inline std::vector<IrrepLabel> irrep_labels(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("irrep_labels: need n_qubits >= 1");
  std::vector<IrrepLabel> out;
  for (int tj = n_qubits % 2; tj <= n_qubits; tj += 2) out.emplace_back(tj);
  return out;
}

namespace detail {

// binom(n, k) in exact integer arithmetic; n up to 64 keeps this in range
inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return c;
}

}  // namespace detail

// Schur-Weyl multiplicity of the spin-j sector of N qubits,
//   m_j = (2j+1)/(N/2+j+1) * binom(N, N/2-j),
// evaluated in exact integer arithmetic (the division is always exact).
inline std::uint64_t multiplicity(int n_qubits, IrrepLabel j) {
  if (n_qubits < 1 || n_qubits > 64)
    throw std::invalid_argument("multiplicity: n_qubits out of supported range [1,64]");
  if (j.twice_j > n_qubits || (n_qubits - j.twice_j) % 2 != 0)
    throw std::invalid_argument("multiplicity: label incompatible with qubit count");
  const std::uint64_t num =
      static_cast<std::uint64_t>(j.twice_j + 1) * detail::binomial(n_qubits, (n_qubits - j.twice_j) / 2);
  const std::uint64_t den = static_cast<std::uint64_t>((n_qubits + j.twice_j) / 2 + 1);
  if (num % den != 0) throw std::logic_error("multiplicity: non-integer result");
  return num / den;
}

inline SpinMatrix jz_matrix(IrrepLabel j) {
  SpinMatrix out = SpinMatrix::Zero(j.dim(), j.dim());
  for (int a = 0; a < j.dim(); ++a) out(a, a) = j.m_at(a);
  return out;
}

// sqrt-weighted raising ladder: J+|j,m> = sqrt(j(j+1)-m(m+1)) |j,m+1>
inline SpinMatrix jplus_matrix(IrrepLabel j) {
  SpinMatrix out = SpinMatrix::Zero(j.dim(), j.dim());
  const double jj = j.j() * (j.j() + 1.0);
  for (int a = 1; a < j.dim(); ++a) {
    const double m = j.m_at(a);
    out(a - 1, a) = std::sqrt(jj - m * (m + 1.0));
  }
  return out;
}

inline SpinMatrix jminus_matrix(IrrepLabel j) { return jplus_matrix(j).adjoint(); }

inline SpinMatrix jx_matrix(IrrepLabel j) {
  const SpinMatrix jp = jplus_matrix(j);
  return 0.5 * (jp + jp.adjoint());
}

inline SpinMatrix jy_matrix(IrrepLabel j) {
  const SpinMatrix jp = jplus_matrix(j);
  return Complex(0.0, -0.5) * (jp - jp.adjoint());
}

// Unit-weight shift E+ = sum_m |j,m+1><j,m| (no sqrt factors, nilpotent)
inline SpinMatrix ladder_raise(IrrepLabel j) {
  SpinMatrix out = SpinMatrix::Zero(j.dim(), j.dim());
  for (int a = 1; a < j.dim(); ++a) out(a - 1, a) = 1.0;
  return out;
}

// Rotation carrying the z-axis onto n = (sin t cos p, sin t sin p, cos t):
//   U(t,p) = exp(-i p Jz) exp(-i t Jy).
// Columns are the rotated eigenstates |j,m;n> of n.J, ordered m = j..-j,
// so U (n.J) U^dag restricted to the z-basis diagonalizes n.J.
inline SpinMatrix rotation_to_direction(IrrepLabel j, double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi))
    throw std::invalid_argument("rotation_to_direction: angles must be finite");
  if (theta < 0.0 || theta > M_PI + 1e-12)
    throw std::invalid_argument("rotation_to_direction: theta outside [0, pi]");

  // exp(-i theta Jy) through the spectral decomposition of Jy
  Eigen::SelfAdjointEigenSolver<SpinMatrix> es(jy_matrix(j));
  Eigen::VectorXcd phases(j.dim());
  for (int k = 0; k < j.dim(); ++k)
    phases(k) = std::exp(Complex(0.0, -theta * es.eigenvalues()(k)));
  SpinMatrix rot_y = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

  for (int a = 0; a < j.dim(); ++a) {
    const Complex zphase = std::exp(Complex(0.0, -phi * j.m_at(a)));
    rot_y.row(a) *= zphase;
  }
  return rot_y;
}

}  // namespace qsb
