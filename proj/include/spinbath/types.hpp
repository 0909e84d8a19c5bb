#pragma once

#include <complex>

#include <Eigen/Dense>

namespace spinbath {

using complexd = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using Matrix2c = Eigen::Matrix2cd;
using Matrix16c = Eigen::Matrix<std::complex<double>, 16, 16>;

// All 4x4 system operators use the fixed basis order |11>, |10>, |01>, |00>.
// Index i = 2*(1 - q1) + (1 - q2) for qubit values q1, q2 in {0, 1}.
inline constexpr int kSystemDim = 4;

Matrix4c state_11();
Matrix4c state_10();
Matrix4c state_bell();  // (|00> + |11>)/sqrt(2)

// Smallest eigenvalue of a Hermitian matrix (input is hermitized first).
double min_eigenvalue(const Matrix4c& herm);

// Checks Hermiticity (1e-10), unit trace (1e-9) and positivity (min
// eigenvalue >= -1e-9). Throws std::domain_error naming the violated
// invariant, with `context` prefixed.
void validate_density_matrix(const Matrix4c& rho,
                             const char* context = "density matrix");
bool is_valid_density_matrix(const Matrix4c& rho);

}  // namespace spinbath
