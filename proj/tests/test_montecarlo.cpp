#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qsb/montecarlo.hpp"

using Catch::Matchers::WithinAbs;
using qsb::Philox4x32;

TEST_CASE("Philox streams are reproducible and random-access") {
  Philox4x32 a(42, 0), b(42, 0);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());

  Philox4x32 c(42, 1);
  bool differs = false;
  Philox4x32 a2(42, 0);
  for (int i = 0; i < 64; ++i) differs = differs || (a2.next_u64() != c.next_u64());
  CHECK(differs);

  Philox4x32 seq(7, 3);
  for (std::uint64_t i = 0; i < 16; ++i) CHECK(seq.next_u64() == Philox4x32::at(7, 3, i));

  Philox4x32 u(123);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.next_double();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("inverse CDF maps uniform and linear densities correctly") {
  const qsb::mc::TabulatedInverseCdf flat([](double) { return 1.0; }, 0.0, 1.0, 257);
  for (double u : {0.0, 0.12, 0.5, 0.93}) CHECK_THAT(flat.sample(u), WithinAbs(u, 1e-10));

  // density 2x on [0,1]: CDF x^2, inverse sqrt(u)
  const qsb::mc::TabulatedInverseCdf ramp([](double x) { return 2.0 * x; }, 0.0, 1.0);
  for (double u : {0.05, 0.3, 0.77, 0.99}) CHECK_THAT(ramp.sample(u), WithinAbs(std::sqrt(u), 1e-7));
}

TEST_CASE("direction samples are reproducible bit for bit") {
  const auto first = qsb::mc::sample_directions(4, 0.6, 5000, 99);
  const auto second = qsb::mc::sample_directions(4, 0.6, 5000, 99);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].cos_theta == second[i].cos_theta);
    CHECK(first[i].phi == second[i].phi);
    CHECK_THAT(first[i].prepared.norm(), Catch::Matchers::WithinAbs(1.0, 1e-14));
  }
  const auto other_seed = qsb::mc::sample_directions(4, 0.6, 5000, 100);
  CHECK(other_seed[0].cos_theta != first[0].cos_theta);
}

TEST_CASE("isotropic inputs give an isotropic sample cloud") {
  const auto report =
      qsb::mc::simulate_protocol(qsb::ProtocolKind::universal(), 3, 0.0, 100000, 7);
  for (int c = 0; c < 3; ++c)
    CHECK(std::abs(report.mean_bloch(c)) <= 4.0 * report.stderr_bloch(c));
}

TEST_CASE("sampled polar moment matches the quadrature moment") {
  const int n = 6;
  const double r = 0.8;
  const auto samples = qsb::mc::sample_directions(n, r, 100000, 4242);
  double mean = 0.0;
  for (const auto& s : samples) mean += s.cos_theta;
  mean /= static_cast<double>(samples.size());
  double second = 0.0;
  for (const auto& s : samples) second += (s.cos_theta - mean) * (s.cos_theta - mean);
  const double sigma = std::sqrt(second / samples.size() / samples.size());

  const qsb::GaussLegendreRule rule = qsb::direction_rule(n);
  double moment = 0.0;
  for (int k = 0; k < rule.count(); ++k)
    moment += 0.5 * rule.weights(k) * rule.nodes(k) * qsb::oracle::direction_posterior(n, r, rule.nodes(k));

  CHECK(std::abs(mean - moment) <= 4.0 * sigma);
}

TEST_CASE("universal simulation lands on the closed-form output length") {
  const auto report =
      qsb::mc::simulate_protocol(qsb::ProtocolKind::universal(), 6, 0.8, 100000, 42);
  const double expected = qsb::universal_scaling(6, 0.8);
  CHECK(std::abs(report.mean_bloch.z() - expected) <= 4.0 * report.stderr_bloch.z());
  CHECK(std::abs(report.mean_bloch.x()) <= 4.0 * report.stderr_bloch.x());
  CHECK(std::abs(report.mean_bloch.y()) <= 4.0 * report.stderr_bloch.y());
  CHECK(std::abs(report.fidelity - qsb::universal_fidelity(6, 0.8)) <= 4.0 * report.fidelity_stderr);
}

TEST_CASE("NOT simulation flips the output vector") {
  const auto report =
      qsb::mc::simulate_protocol(qsb::ProtocolKind::universal_not(), 1, 1.0, 100000, 13);
  CHECK(std::abs(report.mean_bloch.z() + 1.0 / 3.0) <= 4.0 * report.stderr_bloch.z());
}

TEST_CASE("phase simulation is transverse-free at r = 0 and aligned at r > 0") {
  const auto mixed = qsb::mc::simulate_protocol(qsb::ProtocolKind::phase(), 4, 0.0, 20000, 3);
  CHECK(std::abs(mixed.mean_bloch.x()) <= 4.0 * mixed.stderr_bloch.x());
  CHECK(std::abs(mixed.mean_bloch.y()) <= 4.0 * mixed.stderr_bloch.y());
  CHECK(mixed.mean_bloch.z() == 0.0);

  const auto aligned = qsb::mc::simulate_protocol(qsb::ProtocolKind::phase(), 4, 0.7, 100000, 5);
  CHECK(std::abs(aligned.mean_bloch.x() - qsb::phase_scaling(4, 0.7)) <=
        4.0 * aligned.stderr_bloch.x());
  CHECK(std::abs(aligned.mean_bloch.y()) <= 4.0 * aligned.stderr_bloch.y());
}

TEST_CASE("simulation rejects unsupported configurations") {
  CHECK_THROWS_AS(qsb::mc::simulate_protocol(qsb::ProtocolKind::universal(), 2, 0.5, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(qsb::mc::simulate_protocol(qsb::ProtocolKind::optimal(4), 2, 0.5, 1000, 1),
                  std::invalid_argument);
}

TEST_CASE("two-site output at r = 0 is the symmetric-subspace state") {
  const qsb::GaussLegendreRule rule = qsb::direction_rule(2);
  const Eigen::Matrix4cd two = qsb::mc::two_site_reduction(2, 0.0, rule);
  Eigen::Matrix4cd swap;
  swap << 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1;
  const Eigen::Matrix4cd symmetric_third = (Eigen::Matrix4cd::Identity() + swap) / 6.0;
  CHECK((two - symmetric_third).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-site output is a symmetric PPT state with the right margins") {
  for (int n : {1, 4, 6, 8}) {
    const qsb::GaussLegendreRule rule = qsb::direction_rule(n);
    for (double r : {0.0, 0.3, 0.7, 1.0}) {
      const Eigen::Matrix4cd two = qsb::mc::two_site_reduction(n, r, rule);
      CHECK_THAT(two.trace().real(), WithinAbs(1.0, 1e-12));
      CHECK((two - two.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(qsb::mc::min_eigenvalue(two) >= -1e-12);

      Eigen::Matrix4cd swap;
      swap << 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1;
      CHECK((swap * two * swap - two).cwiseAbs().maxCoeff() < 1e-12);

      CHECK(qsb::mc::min_eigenvalue(qsb::mc::partial_transpose_second(two)) >= -1e-9);

      // margins: trace out either site and compare with the single-site output
      Eigen::Matrix2cd first = Eigen::Matrix2cd::Zero();
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) first(i, k) += two(2 * i + l, 2 * k + l);
      const double z_margin = (first(0, 0) - first(1, 1)).real();
      CHECK_THAT(z_margin, WithinAbs(qsb::universal_scaling(n, r), 1e-10));
      CHECK(std::abs(first(0, 1)) < 1e-10);
    }
  }
}
