#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qsb/oracle.hpp"
#include "qsb/protocols.hpp"
#include "qsb/quadrature.hpp"
#include "qsb/rng.hpp"

// Stochastic simulation of the measure-and-prepare protocols: draw estimates
// from the exact posterior, prepare the pure output, accumulate statistics.
namespace qsb::mc {

// Samples are organized in fixed-size blocks; block b draws from Philox
// substream b, so the stream is independent of any parallel schedule and the
// merge order is fixed by construction.
inline constexpr std::size_t sample_block_size = 4096;

// Inverse-CDF sampler for a smooth density tabulated on a uniform grid.
// The CDF is accumulated per cell with an 8-point Gauss-Legendre rule and
// interpolated by a Fritsch-Carlson monotone cubic, so draws are exact up to
// interpolation error far below statistical noise.
class TabulatedInverseCdf {
 public:
  template <typename Density>
  TabulatedInverseCdf(Density&& density, double lo, double hi, int node_count = 2048) {
    if (node_count < 2) throw std::invalid_argument("TabulatedInverseCdf: need >= 2 nodes");
    if (!(hi > lo)) throw std::invalid_argument("TabulatedInverseCdf: empty support");
    const GaussLegendreRule cell_rule = GaussLegendreRule::make(8);
    nodes_.resize(node_count);
    cdf_.resize(node_count);
    const double h = (hi - lo) / (node_count - 1);
    for (int i = 0; i < node_count; ++i) nodes_[i] = lo + h * i;
    nodes_.back() = hi;
    cdf_[0] = 0.0;
    for (int i = 0; i + 1 < node_count; ++i) {
      const double a = nodes_[i], b = nodes_[i + 1];
      double cell = 0.0;
      for (int k = 0; k < cell_rule.count(); ++k) {
        const double x = 0.5 * (a + b) + 0.5 * (b - a) * cell_rule.nodes(k);
        cell += 0.5 * (b - a) * cell_rule.weights(k) * density(x);
      }
      cdf_[i + 1] = cdf_[i] + std::max(cell, 0.0);
    }
    const double total = cdf_.back();
    if (!(total > 0.0)) throw std::invalid_argument("TabulatedInverseCdf: density integrates to zero");
    for (double& v : cdf_) v /= total;
    cdf_.back() = 1.0;
    build_slopes();
  }

  // map u in [0,1) to the abscissa x with CDF(x) = u
  double sample(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t cell = it == cdf_.begin() ? 0 : static_cast<std::size_t>(it - cdf_.begin()) - 1;
    cell = std::min(cell, cdf_.size() - 2);
    const double f0 = cdf_[cell], f1 = cdf_[cell + 1];
    const double h = nodes_[cell + 1] - nodes_[cell];
    if (f1 - f0 < 1e-300) return nodes_[cell];

    // Hermite cubic on the cell, solved by safeguarded Newton
    const double s0 = slopes_[cell] * h, s1 = slopes_[cell + 1] * h;
    double t = (u - f0) / (f1 - f0);
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 60; ++iter) {
      const double value = hermite(f0, f1, s0, s1, t) - u;
      if (value > 0.0) hi = t; else lo = t;
      const double deriv = hermite_derivative(f0, f1, s0, s1, t);
      double step = deriv > 1e-300 ? t - value / deriv : 0.5 * (lo + hi);
      if (step <= lo || step >= hi) step = 0.5 * (lo + hi);
      if (std::abs(step - t) < 1e-15) { t = step; break; }
      t = step;
    }
    return nodes_[cell] + t * h;
  }

 private:
  static double hermite(double f0, double f1, double s0, double s1, double t) {
    const double t2 = t * t, t3 = t2 * t;
    return f0 * (2 * t3 - 3 * t2 + 1) + s0 * (t3 - 2 * t2 + t) + f1 * (-2 * t3 + 3 * t2) +
           s1 * (t3 - t2);
  }
  static double hermite_derivative(double f0, double f1, double s0, double s1, double t) {
    const double t2 = t * t;
    return f0 * (6 * t2 - 6 * t) + s0 * (3 * t2 - 4 * t + 1) + f1 * (-6 * t2 + 6 * t) +
           s1 * (3 * t2 - 2 * t);
  }

  void build_slopes() {
    const std::size_t n = nodes_.size();
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
      secant[i] = (cdf_[i + 1] - cdf_[i]) / (nodes_[i + 1] - nodes_[i]);
    slopes_.assign(n, 0.0);
    slopes_[0] = secant[0];
    slopes_[n - 1] = secant[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (secant[i - 1] <= 0.0 || secant[i] <= 0.0) {
        slopes_[i] = 0.0;  // flat neighbor: keep monotone
      } else {
        slopes_[i] = 2.0 * secant[i - 1] * secant[i] / (secant[i - 1] + secant[i]);
      }
    }
  }

  std::vector<double> nodes_;
  std::vector<double> cdf_;
  std::vector<double> slopes_;
};

// One Monte Carlo draw: the estimated direction (or phase, stored in phi with
// cos_theta = 0) and the pure state prepared from it.
struct EstimateSample {
  double cos_theta = 1.0;
  double phi = 0.0;
  Eigen::Vector3d prepared = Eigen::Vector3d::UnitZ();
};

// i.i.d. draws from the direction posterior for an input along +z:
// inverse-CDF in cos(theta-hat), uniform azimuth. Bit-reproducible per seed.
inline std::vector<EstimateSample> sample_directions(int n_qubits, double r, std::size_t count,
                                                     std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_directions: need count >= 1");
  const TabulatedInverseCdf cdf(
      [n_qubits, r](double c) { return 0.5 * oracle::direction_posterior(n_qubits, r, c); },
      -1.0, 1.0);
  std::vector<EstimateSample> out;
  out.reserve(count);
  for (std::size_t start = 0; start < count; start += sample_block_size) {
    Philox4x32 rng(seed, start / sample_block_size);
    const std::size_t stop = std::min(count, start + sample_block_size);
    for (std::size_t i = start; i < stop; ++i) {
      EstimateSample sample;
      sample.cos_theta = cdf.sample(rng.next_double());
      sample.phi = 2.0 * M_PI * rng.next_double();
      const double sin_theta = std::sqrt(std::max(0.0, 1.0 - sample.cos_theta * sample.cos_theta));
      sample.prepared = {sin_theta * std::cos(sample.phi), sin_theta * std::sin(sample.phi),
                         sample.cos_theta};
      out.push_back(sample);
    }
  }
  return out;
}

// i.i.d. draws from the phase posterior for an input at phase 0 (equatorial
// input of length r); the prepared state lies on the equator.
inline std::vector<EstimateSample> sample_phases(int n_qubits, double r, std::size_t count,
                                                 std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_phases: need count >= 1");
  const oracle::PhasePosterior posterior(n_qubits, r);
  const TabulatedInverseCdf cdf(
      [&posterior](double phi) { return posterior(phi) / (2.0 * M_PI); }, 0.0, 2.0 * M_PI);
  std::vector<EstimateSample> out;
  out.reserve(count);
  for (std::size_t start = 0; start < count; start += sample_block_size) {
    Philox4x32 rng(seed, start / sample_block_size);
    const std::size_t stop = std::min(count, start + sample_block_size);
    for (std::size_t i = start; i < stop; ++i) {
      EstimateSample sample;
      sample.cos_theta = 0.0;
      sample.phi = cdf.sample(rng.next_double());
      sample.prepared = {std::cos(sample.phi), std::sin(sample.phi), 0.0};
      out.push_back(sample);
    }
  }
  return out;
}

struct SimulationReport {
  ProtocolKind protocol;
  int n_qubits = 0;
  double r = 0.0;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  Eigen::Vector3d mean_bloch = Eigen::Vector3d::Zero();
  Eigen::Vector3d stderr_bloch = Eigen::Vector3d::Zero();
  double fidelity = 0.0;
  double fidelity_stderr = 0.0;
  std::optional<Eigen::Matrix4cd> two_site;
};

// Simulate the measure-and-prepare run and report empirical single-site
// statistics. The universal input points along +z (the NOT output along -z),
// the phase input along +x.
inline SimulationReport simulate_protocol(ProtocolKind kind, int n_qubits, double r,
                                          std::size_t count, std::uint64_t seed) {
  if (count < 100) throw std::invalid_argument("simulate_protocol: need count >= 100");
  if (kind.family == ProtocolKind::Family::optimal_universal)
    throw std::invalid_argument("simulate_protocol: the coherent optimal map is out of scope");

  const bool is_phase = kind.family == ProtocolKind::Family::phase;
  const bool is_not = kind.family == ProtocolKind::Family::universal_not;
  std::vector<EstimateSample> samples = is_phase ? sample_phases(n_qubits, r, count, seed)
                                                 : sample_directions(n_qubits, r, count, seed);

  SimulationReport report;
  report.protocol = kind;
  report.n_qubits = n_qubits;
  report.r = r;
  report.sample_count = count;
  report.seed = seed;

  Eigen::Vector3d sum = Eigen::Vector3d::Zero(), sum_sq = Eigen::Vector3d::Zero();
  double fid_sum = 0.0, fid_sum_sq = 0.0;
  for (EstimateSample& sample : samples) {
    if (is_not) sample.prepared = -sample.prepared;
    sum += sample.prepared;
    sum_sq += sample.prepared.cwiseProduct(sample.prepared);
    // fidelity of the prepared pure state with the target pure state
    const double fid = is_phase ? 0.5 * (1.0 + std::cos(sample.phi)) : 0.5 * (1.0 + sample.cos_theta);
    fid_sum += fid;
    fid_sum_sq += fid * fid;
  }
  const double n = static_cast<double>(count);
  report.mean_bloch = sum / n;
  for (int c = 0; c < 3; ++c) {
    const double var = std::max(0.0, sum_sq(c) / n - report.mean_bloch(c) * report.mean_bloch(c));
    report.stderr_bloch(c) = std::sqrt(var / n);
  }
  report.fidelity = fid_sum / n;
  report.fidelity_stderr =
      std::sqrt(std::max(0.0, fid_sum_sq / n - report.fidelity * report.fidelity) / n);
  return report;
}

// Two-site reduced output ∫ p(n-hat) |n-hat><n-hat|^{⊗2} of the universal
// scheme, by quadrature (not sampling). Exchange-symmetric, PSD, and PPT;
// its margins equal the single-site output.
inline Eigen::Matrix4cd two_site_reduction(int n_qubits, double r, const GaussLegendreRule& rule,
                                           int phi_points = 256) {
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < rule.count(); ++k) {
    const double c = rule.nodes(k);
    const double half = std::acos(std::clamp(c, -1.0, 1.0)) * 0.5;
    const double pd = oracle::direction_posterior(n_qubits, r, c);
    Eigen::Matrix4cd avg = Eigen::Matrix4cd::Zero();
    for (int l = 0; l < phi_points; ++l) {
      const double phi = 2.0 * M_PI * l / phi_points;
      Eigen::Vector2cd ket(std::cos(half), std::exp(Complex(0.0, phi)) * std::sin(half));
      Eigen::Vector4cd pair_ket;
      pair_ket << ket(0) * ket, ket(1) * ket;
      avg += pair_ket * pair_ket.adjoint();
    }
    out += 0.5 * rule.weights(k) * pd / phi_points * avg;
  }
  return out;
}

// Partial transpose over the second qubit of a two-qubit operator.
inline Eigen::Matrix4cd partial_transpose_second(const Eigen::Matrix4cd& op) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + l, 2 * k + j) = op(2 * i + j, 2 * k + l);
  return out;
}

inline double min_eigenvalue(const Eigen::Matrix4cd& op) {
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(op).eigenvalues().minCoeff();
}

}  // namespace qsb::mc
