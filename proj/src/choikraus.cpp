#include "spinbath/choikraus.hpp"

#include <cmath>
#include <stdexcept>

namespace spinbath {

namespace {
constexpr double kCpTol = 1e-8;
}

ChoiMatrix choi(const MapCoefficients& coeffs, double t) {
  if (t != coeffs.t) {
    throw std::domain_error("choi: time does not match the map coefficients");
  }
  ChoiMatrix c;
  c.t = t;
  for (int i = 0; i < 4; ++i) {
    // Diagonal block i holds the populations fed by |i><i|.
    for (int k = 0; k < 4; ++k) {
      c.entries(4 * i + k, 4 * i + k) = coeffs.pop(k, i);
    }
    // Off-diagonal block (i, j) holds the single coherence factor.
    for (int j = i + 1; j < 4; ++j) {
      c.entries(4 * i + i, 4 * j + j) = coeffs.coherence(i, j);
      c.entries(4 * j + j, 4 * i + i) = std::conj(coeffs.coherence(i, j));
    }
  }
  return c;
}

KrausSet kraus_from_choi(const ChoiMatrix& c, double threshold) {
  Eigen::SelfAdjointEigenSolver<Matrix16c> es(c.entries);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("kraus_from_choi: eigensolver failed");
  }
  KrausSet ks;
  for (int idx = 15; idx >= 0; --idx) {  // descending eigenvalues
    const double lambda = es.eigenvalues()[idx];
    if (lambda < -kCpTol) {
      throw std::runtime_error(
          "kraus_from_choi: Choi eigenvalue " + std::to_string(lambda) +
          " < -1e-8; the map is not completely positive (upstream bug)");
    }
    if (lambda <= threshold) continue;  // numerical zero, clamped away
    const double root = std::sqrt(lambda);
    Matrix4c k;
    for (int in = 0; in < 4; ++in) {
      for (int out = 0; out < 4; ++out) {
        k(out, in) = root * es.eigenvectors()(4 * in + out, idx);
      }
    }
    ks.operators.push_back(k);
    ks.eigenvalues.push_back(lambda);
  }
  return ks;
}

Matrix4c apply_kraus(const KrausSet& ks, const Matrix4c& rho0) {
  validate_density_matrix(rho0, "apply_kraus: rho0");
  Matrix4c out = Matrix4c::Zero();
  for (const auto& k : ks.operators) {
    out += k * rho0 * k.adjoint();
  }
  return out;
}

}  // namespace spinbath
