#include "spinbath/oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "spinbath/dynmap.hpp"
#include "spinbath/thermal.hpp"
#include "test_helpers.hpp"

using namespace spinbath;
using spinbath::testing::fig2_params;
using spinbath::testing::max_abs_diff;
using spinbath::testing::random_params;
using spinbath::testing::random_sector;

namespace {

ModelParams small_params(int size = 4) {
  ModelParams p = fig2_params();
  p.M = p.N = size;
  return p;
}

}  // namespace

TEST_CASE("expm of zero and of a diagonal matrix") {
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(3, 3);
  CHECK((oracle::expm(zero) - Eigen::MatrixXcd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(2, 2);
  diag(0, 0) = complexd(0.0, -2.0);
  diag(1, 1) = complexd(0.0, 3.5);
  const Eigen::MatrixXcd e = oracle::expm(diag);
  CHECK(std::abs(e(0, 0) - std::exp(complexd(0.0, -2.0))) < 1e-13);
  CHECK(std::abs(e(1, 1) - std::exp(complexd(0.0, 3.5))) < 1e-13);
  CHECK(std::abs(e(0, 1)) == 0.0);
}

TEST_CASE("expm reproduces the addition law on commuting arguments") {
  std::mt19937 rng(61);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXcd a(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = complexd(normal(rng), normal(rng));
    const Eigen::MatrixXcd whole = oracle::expm(a);
    const Eigen::MatrixXcd halves = oracle::expm(a / 2.0) * oracle::expm(a / 2.0);
    CHECK((whole - halves).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("sector_expm starts at (1, 0, 0)") {
  const SectorCoefficients c =
      sector_coefficients(fig2_params(), Sector::S11, 2, 3);
  const AmplitudeTriple amp = oracle::sector_expm(c, 0.0);
  CHECK(std::abs(amp.x - complexd(1.0)) < 1e-14);
  CHECK(std::abs(amp.y) < 1e-14);
  CHECK(std::abs(amp.z) < 1e-14);
}

TEST_CASE("sector_expm on a diagonal generator is a phase") {
  const SectorCoefficients c{1.3, 0.2, -0.7, 0.0, 0.0, 0.0, 0.0};
  const AmplitudeTriple amp = oracle::sector_expm(c, 2.0);
  CHECK(std::abs(amp.x - std::exp(complexd(0.0, -2.6))) < 1e-12);
  CHECK(std::abs(amp.y) == 0.0);
  CHECK(std::abs(amp.z) == 0.0);
}

TEST_CASE("closed form and exponential agree over random draws") {
  std::mt19937 rng(62);
  std::uniform_real_distribution<double> ts(0.1, 5.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const ModelParams p = random_params(rng);
    std::uniform_int_distribution<int> ms(0, p.M), ns(0, p.N);
    const SectorCoefficients c =
        sector_coefficients(p, random_sector(rng), ms(rng), ns(rng));
    const double t = ts(rng);
    const AmplitudeTriple a = amplitudes_at(solve_sector(c), t);
    const AmplitudeTriple b = oracle::sector_expm(c, t);
    worst = std::max({worst, std::abs(a.x - b.x), std::abs(a.y - b.y),
                      std::abs(a.z - b.z)});
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("projected propagator reproduces the initial state at t = 0") {
  std::mt19937 rng(63);
  const Matrix4c rho0 = spinbath::testing::random_density_matrix(rng);
  CHECK(max_abs_diff(oracle::projected_propagator(small_params(), rho0, 0.0),
                     rho0) < 1e-10);
}

TEST_CASE("projected propagator rejects large baths") {
  CHECK_THROWS_AS(
      oracle::projected_propagator(fig2_params(), state_11(), 1.0),
      std::domain_error);
}

TEST_CASE("map and block propagator agree at small bath sizes") {
  const ModelParams p = small_params();
  const MapEngine engine(p);
  double worst = 0.0;
  for (const Matrix4c& rho0 : {state_11(), state_10(), state_bell()}) {
    for (double t : {0.5, 1.0, 2.0, 3.5, 5.0}) {
      const Matrix4c direct = evolve(engine.coefficients(t), rho0);
      const Matrix4c reference = oracle::projected_propagator(p, rho0, t);
      worst = std::max(worst, max_abs_diff(direct, reference));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("decoupled propagator keeps populations frozen") {
  ModelParams p = small_params();
  p.eps1 = p.eps2 = 0.0;
  for (double t : {0.7, 3.0}) {
    const Matrix4c rho = oracle::projected_propagator(p, state_10(), t);
    CHECK(std::abs(rho(1, 1) - complexd(1.0)) < 1e-10);
  }
}

TEST_CASE("block propagation is unitary within each closure") {
  // Unit total probability of each propagated seed state.
  const ModelParams p = small_params();
  for (Sector s : kAllSectors) {
    for (int m = 0; m <= p.M; ++m) {
      for (int n = 0; n <= p.N; ++n) {
        const auto [wy, wz] = sector_transfer_weights(s, m, n);
        const SectorCoefficients c = sector_coefficients(p, s, m, n);
        const AmplitudeTriple amp = oracle::sector_expm(c, 1.7);
        const double total = std::norm(amp.x) + wy * std::norm(amp.y) +
                             wz * std::norm(amp.z);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("untruncated ladder: no deviation without coupling") {
  ModelParams p = small_params();
  p.eps1 = p.eps2 = 0.0;
  const std::vector<double> times = {0.5, 1.5, 3.0};
  const oracle::OracleReport report =
      oracle::full_hp_deviation(p, state_11(), times);
  CHECK(report.max_abs_deviation < 1e-10);
}

TEST_CASE("untruncated ladder: perturbative couplings stay close") {
  ModelParams p = small_params();
  p.delta = 5.0;
  p.eps1 = p.eps2 = 0.05;
  std::vector<double> times;
  for (int i = 1; i <= 10; ++i) times.push_back(0.5 * i);
  const oracle::OracleReport report =
      oracle::full_hp_deviation(p, state_11(), times);
  CHECK(report.max_abs_deviation < 1e-2);
}

TEST_CASE("untruncated ladder at the worked couplings: reported only") {
  const std::vector<double> times = {1.0, 2.0};
  const oracle::OracleReport report =
      oracle::full_hp_deviation(small_params(), state_11(), times);
  CHECK(std::isfinite(report.max_abs_deviation));
  CHECK(!report.location.empty());
  MESSAGE("untruncated-ladder deviation at the worked couplings: ",
          report.max_abs_deviation, " (", report.location, ")");
}
