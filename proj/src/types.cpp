#include "spinbath/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinbath {

namespace {
constexpr double kHermTol = 1e-10;
constexpr double kTraceTol = 1e-9;
constexpr double kEigTol = 1e-9;
}  // namespace

Matrix4c state_11() {
  Matrix4c rho = Matrix4c::Zero();
  rho(0, 0) = 1.0;
  return rho;
}

Matrix4c state_10() {
  Matrix4c rho = Matrix4c::Zero();
  rho(1, 1) = 1.0;
  return rho;
}

Matrix4c state_bell() {
  Matrix4c rho = Matrix4c::Zero();
  rho(0, 0) = rho(0, 3) = rho(3, 0) = rho(3, 3) = 0.5;
  return rho;
}

double min_eigenvalue(const Matrix4c& herm) {
  Matrix4c h = 0.5 * (herm + herm.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void validate_density_matrix(const Matrix4c& rho, const char* context) {
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (!(herm <= kHermTol)) {
    throw std::domain_error(std::string(context) +
                            ": not Hermitian (max |rho - rho^dag| = " +
                            std::to_string(herm) + ")");
  }
  const complexd tr = rho.trace();
  if (!(std::abs(tr - complexd(1.0, 0.0)) <= kTraceTol)) {
    throw std::domain_error(std::string(context) + ": trace != 1 (" +
                            std::to_string(tr.real()) + ")");
  }
  const double mineig = min_eigenvalue(rho);
  if (!(mineig >= -kEigTol)) {
    throw std::domain_error(std::string(context) +
                            ": not positive semidefinite (min eigenvalue = " +
                            std::to_string(mineig) + ")");
  }
}

bool is_valid_density_matrix(const Matrix4c& rho) {
  try {
    validate_density_matrix(rho);
    return true;
  } catch (const std::domain_error&) {
    return false;
  }
}

}  // namespace spinbath
