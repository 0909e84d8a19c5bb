#include "spinbath/choikraus.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "test_helpers.hpp"

using namespace spinbath;
using spinbath::testing::fig2_params;
using spinbath::testing::max_abs_diff;
using spinbath::testing::random_density_matrix;

namespace {

ModelParams small_params() {
  ModelParams p = fig2_params();
  p.M = p.N = 8;
  return p;
}

double completeness_error(const KrausSet& ks) {
  Matrix4c sum = Matrix4c::Zero();
  for (const auto& k : ks.operators) sum += k.adjoint() * k;
  return (sum - Matrix4c::Identity()).cwiseAbs().maxCoeff();
}

double min_choi_eigenvalue(const ChoiMatrix& c) {
  Eigen::SelfAdjointEigenSolver<Matrix16c> es(c.entries,
                                              Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("identity channel: rank-1 Choi with eigenvalue 4 and K = identity") {
  const MapCoefficients coeffs = map_coefficients(small_params(), 0.0);
  const ChoiMatrix c = choi(coeffs, 0.0);
  CHECK(std::abs(c.entries.trace() - complexd(4.0)) < 1e-10);

  Eigen::SelfAdjointEigenSolver<Matrix16c> es(c.entries,
                                              Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues()[15] == doctest::Approx(4.0).epsilon(1e-10));
  for (int i = 0; i < 15; ++i) {
    CHECK(std::abs(es.eigenvalues()[i]) < 1e-10);
  }

  const KrausSet ks = kraus_from_choi(c);
  REQUIRE(ks.operators.size() == 1);
  // Identity up to a global phase.
  const complexd phase = ks.operators[0](0, 0) /
                         std::abs(ks.operators[0](0, 0));
  CHECK(max_abs_diff(ks.operators[0] / phase, Matrix4c::Identity()) < 1e-8);
}

TEST_CASE("time mismatch is rejected") {
  const MapCoefficients coeffs = map_coefficients(small_params(), 1.0);
  CHECK_THROWS_AS(choi(coeffs, 2.0), std::domain_error);
}

TEST_CASE("complete positivity at the worked configuration") {
  const MapCoefficients coeffs = map_coefficients(fig2_params(), 1.0);
  const ChoiMatrix c = choi(coeffs, 1.0);
  CHECK(std::abs(c.entries.trace() - complexd(4.0)) < 1e-8);
  CHECK(min_choi_eigenvalue(c) >= -1e-8);
}

TEST_CASE("decoupled channel is unitary: eigenvalues {4, 0, ...}") {
  ModelParams p = small_params();
  p.eps1 = p.eps2 = 0.0;
  const ChoiMatrix c = choi(map_coefficients(p, 2.7), 2.7);
  Eigen::SelfAdjointEigenSolver<Matrix16c> es(c.entries,
                                              Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues()[15] == doctest::Approx(4.0).epsilon(1e-9));
  for (int i = 0; i < 15; ++i) CHECK(std::abs(es.eigenvalues()[i]) < 1e-9);
  for (int k = 0; k < 16; ++k) {
    const complexd diag = c.entries(k, k);
    const bool populated = k % 5 == 0;  // the |A|^2, |J|^2, |G|^2, |D|^2 slots
    CHECK(std::abs(diag) == doctest::Approx(populated ? 1.0 : 0.0));
  }
}

TEST_CASE("Kraus completeness and map equivalence at random times") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> ts(0.0, 10.0);
  const MapEngine engine(small_params());
  for (int trial = 0; trial < 10; ++trial) {
    const double t = ts(rng);
    const MapCoefficients coeffs = engine.coefficients(t);
    const KrausSet ks = kraus_from_choi(choi(coeffs, t));
    CHECK(completeness_error(ks) < 1e-8);

    const Matrix4c rho0 = random_density_matrix(rng);
    CHECK(max_abs_diff(apply_kraus(ks, rho0), evolve(coeffs, rho0)) < 1e-8);
  }
}

TEST_CASE("bell state through the Kraus channel") {
  ModelParams p = fig2_params();
  p.delta = 3.0;
  p.eps1 = 1.3;
  p.eps2 = 1.25;
  const MapCoefficients coeffs = map_coefficients(p, 0.7);
  const KrausSet ks = kraus_from_choi(choi(coeffs, 0.7));
  CHECK(max_abs_diff(apply_kraus(ks, state_bell()),
                     evolve(coeffs, state_bell())) < 1e-8);
}

TEST_CASE("maximally mixed input keeps unit trace") {
  const MapCoefficients coeffs = map_coefficients(small_params(), 3.1);
  const KrausSet ks = kraus_from_choi(choi(coeffs, 3.1));
  const Matrix4c mixed = 0.25 * Matrix4c::Identity();
  CHECK(std::abs(apply_kraus(ks, mixed).trace() - complexd(1.0)) < 1e-9);
}

TEST_CASE("complete positivity across a time sweep") {
  const MapEngine engine(small_params());
  for (int i = 0; i <= 20; ++i) {
    const double t = i;
    const ChoiMatrix c = choi(engine.coefficients(t), t);
    CHECK(std::abs(c.entries.trace() - complexd(4.0)) < 1e-8);
    CHECK(min_choi_eigenvalue(c) >= -1e-8);
  }
}

TEST_CASE("a negative Choi eigenvalue raises the CP-violation error") {
  ChoiMatrix corrupt;
  corrupt.entries = Matrix16c::Identity() * 0.25;
  corrupt.entries(0, 0) = -1e-3;
  CHECK_THROWS_AS(kraus_from_choi(corrupt), std::runtime_error);
}

TEST_CASE("near-null eigenvalues are clamped away, never emitted") {
  ChoiMatrix c;
  c.entries = Matrix16c::Zero();
  c.entries(0, 0) = 4.0 - 1e-9;
  c.entries(1, 1) = 5e-11;   // inside the clamp window
  c.entries(2, 2) = -5e-9;   // inside the clamp window, negative side
  const KrausSet ks = kraus_from_choi(c);
  CHECK(ks.operators.size() == 1);
}
