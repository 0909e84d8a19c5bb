#pragma once

#include <vector>

#include "spinbath/dynmap.hpp"
#include "spinbath/types.hpp"

namespace spinbath {

// Choi state of the map, unnormalized: C[(i,k),(j,l)] = phi(|i><j|)[k,l]
// with row index 4*i + k. Hermitian with trace 4; positive semidefiniteness
// certifies complete positivity.
struct ChoiMatrix {
  Matrix16c entries = Matrix16c::Zero();
  double t = 0.0;
};

struct KrausSet {
  std::vector<Matrix4c> operators;   // sorted by descending Choi eigenvalue
  std::vector<double> eigenvalues;   // the retained eigenvalues
};

// Assembles the Choi matrix from the map coefficients. `t` must match
// coeffs.t (std::domain_error otherwise).
ChoiMatrix choi(const MapCoefficients& coeffs, double t);

// Eigendecomposition of the Choi matrix. Eigenvalues above `threshold`
// become Kraus operators K[k][i] = sqrt(lambda) * vec[4*i + k]; values in
// [-1e-8, threshold] are dropped as numerical zeros; anything below -1e-8
// throws std::runtime_error (complete-positivity violation upstream).
KrausSet kraus_from_choi(const ChoiMatrix& c, double threshold = 1e-10);

// sum_i K_i rho0 K_i^dagger. rho0 must satisfy the density matrix
// invariants.
Matrix4c apply_kraus(const KrausSet& ks, const Matrix4c& rho0);

}  // namespace spinbath
