#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace qsb {

// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
// Legendre recurrence. Exact for polynomials of degree <= 2n-1; the weights
// sum to the interval length.
struct GaussLegendreRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  int count() const { return static_cast<int>(nodes.size()); }

  static GaussLegendreRule make(int point_count) {
    if (point_count < 1) throw std::invalid_argument("GaussLegendreRule: need at least one node");
    GaussLegendreRule rule;
    rule.nodes.resize(point_count);
    rule.weights.resize(point_count);
    const int half = (point_count + 1) / 2;
    for (int i = 0; i < half; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (point_count + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p1 = 1.0, p2 = 0.0;
        for (int k = 1; k <= point_count; ++k) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * k - 1.0) * z * p2 - (k - 1.0) * p3) / k;
        }
        pp = point_count * (z * p1 - p2) / (z * z - 1.0);
        const double dz = p1 / pp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      rule.nodes(i) = -z;
      rule.nodes(point_count - 1 - i) = z;
      const double w = 2.0 / ((1.0 - z * z) * pp * pp);
      rule.weights(i) = w;
      rule.weights(point_count - 1 - i) = w;
    }
    return rule;
  }
};

// Quadrature order used for the direction integrals of N-qubit posteriors:
// the integrands are polynomials in cos(theta) of degree <= N+2, so
// 4(N+2) nodes carry a comfortable safety factor.
inline GaussLegendreRule direction_rule(int n_qubits) {
  return GaussLegendreRule::make(4 * (n_qubits + 2));
}

}  // namespace qsb
