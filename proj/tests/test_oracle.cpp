#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qsb/oracle.hpp"
#include "qsb/protocols.hpp"

using Catch::Matchers::WithinAbs;
using qsb::BlochState;
using qsb::IrrepLabel;

TEST_CASE("Gauss-Legendre rules are consistent and exact") {
  for (int n : {2, 5, 16, 40}) {
    const qsb::GaussLegendreRule rule = qsb::GaussLegendreRule::make(n);
    CHECK_THAT(rule.weights.sum(), WithinAbs(2.0, 1e-13));
    // exact for monomials up to degree 2n-1
    for (int degree : {1, 2, 2 * n - 2, 2 * n - 1}) {
      double integral = 0.0;
      for (int k = 0; k < n; ++k) integral += rule.weights(k) * std::pow(rule.nodes(k), degree);
      const double exact = degree % 2 == 1 ? 0.0 : 2.0 / (degree + 1);
      CHECK_THAT(integral, WithinAbs(exact, 1e-12));
    }
  }
}

TEST_CASE("tensor power reproduces small cases") {
  const BlochState state = BlochState::from_angles(0.44, 0.7, 1.3);
  CHECK((qsb::oracle::full_tensor_state(1, state) - state.density_matrix()).cwiseAbs().maxCoeff() <
        1e-15);

  const Eigen::MatrixXcd mixed2 = qsb::oracle::full_tensor_state(2, BlochState(0.0, Eigen::Vector3d::UnitZ()));
  CHECK((mixed2 - 0.25 * Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(qsb::oracle::full_tensor_state(13, state), std::invalid_argument);
}

TEST_CASE("tensor-power purity is the single-qubit purity to the N") {
  for (int n : {2, 4, 5}) {
    const double r = 0.37;
    const Eigen::MatrixXcd state = qsb::oracle::full_tensor_state(n, BlochState::from_angles(r, 1.0, 0.3));
    CHECK_THAT((state * state).trace().real(),
               WithinAbs(std::pow(0.5 * (1.0 + r * r), n), 1e-12));
    CHECK_THAT(state.trace().real(), WithinAbs(1.0, 1e-13));
  }
}

TEST_CASE("Casimir spectrum identifies singlet and triplet") {
  const auto blocks = qsb::oracle::casimir_decomposition(2);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].j == IrrepLabel(0));
  CHECK(blocks[0].multiplicity == 1);
  CHECK(blocks[1].j == IrrepLabel(2));
  CHECK(blocks[1].multiplicity == 1);
}

TEST_CASE("Casimir ranks reproduce the multiplicity formula") {
  for (int n = 1; n <= 7; ++n) {
    int total_rank = 0;
    for (const auto& block : qsb::oracle::casimir_decomposition(n)) {
      CHECK(block.multiplicity == static_cast<int>(qsb::multiplicity(n, block.j)));
      total_rank += block.multiplicity * block.j.dim();
      // projectors are idempotent
      CHECK((block.projector * block.projector - block.projector).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK(total_rank == 1 << n);
  }
}

TEST_CASE("Casimir block traces equal the closed-form weights") {
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double dev = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const auto blocks = qsb::oracle::casimir_decomposition(n);
    for (int trial = 0; trial < 3; ++trial) {
      const double r = trial == 0 ? 1.0 : unit(gen);
      const BlochState state = BlochState::from_angles(r, unit(gen) * M_PI, unit(gen) * 2 * M_PI);
      const Eigen::MatrixXcd full = qsb::oracle::full_tensor_state(n, state);
      const auto weights = qsb::block_weights(n, r);
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const double trace = (blocks[b].projector.cast<qsb::Complex>() * full).trace().real();
        dev = std::max(dev, std::abs(trace - weights[b].second));
      }
    }
  }
  CHECK(dev <= 1e-10);
}

TEST_CASE("Schur isometries reassemble the tensor power") {
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 1; n <= 6; ++n) {
    const auto bases = qsb::oracle::schur_isometries(n);
    const BlochState state = BlochState::from_angles(unit(gen), unit(gen) * M_PI, unit(gen) * 2 * M_PI);
    const Eigen::MatrixXcd rebuilt =
        qsb::oracle::reassemble_full_state(qsb::block_state(n, state), bases);
    const Eigen::MatrixXcd direct = qsb::oracle::full_tensor_state(n, state);
    CHECK((rebuilt - direct).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("posterior is isotropic for maximally mixed inputs") {
  for (double c : {-0.9, -0.2, 0.5, 1.0}) {
    CHECK_THAT(qsb::oracle::direction_posterior(5, 0.0, c), WithinAbs(1.0, 1e-13));
  }
}

TEST_CASE("single pure qubit has the textbook posterior") {
  for (double c : {-1.0, -0.3, 0.0, 0.8, 1.0}) {
    CHECK_THAT(qsb::oracle::direction_posterior(1, 1.0, c), WithinAbs(1.0 + c, 1e-14));
  }
}

TEST_CASE("posterior normalizes over the sphere") {
  for (int n = 1; n <= 8; ++n) {
    const qsb::GaussLegendreRule rule = qsb::direction_rule(n);
    for (double r : {0.0, 0.4, 0.9, 1.0}) {
      double mass = 0.0;
      for (int k = 0; k < rule.count(); ++k)
        mass += 0.5 * rule.weights(k) * qsb::oracle::direction_posterior(n, r, rule.nodes(k));
      CHECK_THAT(mass, WithinAbs(1.0, 1e-10));
    }
  }
}

TEST_CASE("posterior has no azimuthal dependence") {
  double variation = 0.0;
  for (int n : {2, 5}) {
    for (double theta : {0.4, 1.4, 2.8}) {
      const double reference = qsb::oracle::direction_posterior(n, 0.7, theta, 0.0);
      for (double phi : {0.9, 3.0, 5.5}) {
        variation = std::max(variation,
                             std::abs(qsb::oracle::direction_posterior(n, 0.7, theta, phi) - reference));
      }
      // the rotation route agrees with the binomial route
      CHECK_THAT(reference, WithinAbs(qsb::oracle::direction_posterior(n, 0.7, std::cos(theta)), 1e-12));
    }
  }
  CHECK(variation <= 1e-12);
}

TEST_CASE("quadrature fidelity matches the closed form") {
  double dev = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const qsb::GaussLegendreRule rule = qsb::direction_rule(n);
    for (int k = 0; k <= 20; ++k) {
      const double r = k / 20.0;
      dev = std::max(dev, std::abs(qsb::oracle::quadrature_universal_fidelity(n, r, rule) -
                                   qsb::universal_fidelity(n, r)));
    }
  }
  CHECK(dev <= 1e-8);

  const qsb::GaussLegendreRule rule = qsb::direction_rule(1);
  CHECK_THAT(qsb::oracle::quadrature_universal_fidelity(1, 1.0, rule), WithinAbs(2.0 / 3.0, 1e-13));
  CHECK_THAT(qsb::oracle::quadrature_universal_fidelity(3, 0.0, rule), WithinAbs(0.5, 1e-13));
}

TEST_CASE("output Bloch vector points along the input axis") {
  for (int n = 1; n <= 8; ++n) {
    const qsb::GaussLegendreRule rule = qsb::direction_rule(n);
    for (double r : {0.0, 0.5, 1.0}) {
      const Eigen::Vector3d bloch = qsb::oracle::quadrature_output_bloch(n, r, rule);
      CHECK(std::abs(bloch.x()) <= 1e-10);
      CHECK(std::abs(bloch.y()) <= 1e-10);
      CHECK_THAT(bloch.z(), WithinAbs(qsb::universal_scaling(n, r), 1e-10));
    }
  }
}

TEST_CASE("phase quadrature reproduces the single-copy line") {
  for (int k = 0; k <= 10; ++k) {
    const double r = k / 10.0;
    CHECK_THAT(qsb::oracle::quadrature_phase_fidelity(1, r), WithinAbs(0.5 + 0.25 * r, 1e-13));
  }
}

TEST_CASE("phase quadrature matches the calibrated closed form") {
  double dev = 0.0;
  for (int n = 1; n <= 8; ++n) {
    for (int k = 0; k <= 20; ++k) {
      const double r = k / 20.0;
      dev = std::max(dev, std::abs(qsb::oracle::quadrature_phase_fidelity(n, r) -
                                   qsb::phase_fidelity(n, r)));
    }
  }
  CHECK(dev <= 1e-8);
}

TEST_CASE("the miscalibrated phase constant is detected") {
  // with the normalization forced to 4 the closed form must break away from
  // the quadrature by far more than the oracle tolerance
  const double wrong = 0.5 * (1.0 + qsb::phase_scaling(1, 0.8, 4.0));
  CHECK(std::abs(wrong - qsb::oracle::quadrature_phase_fidelity(1, 0.8)) > 1e-3);
}
