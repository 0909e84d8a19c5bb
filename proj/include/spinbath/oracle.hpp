#pragma once

#include <span>
#include <string>

#include <Eigen/Dense>

#include "spinbath/model.hpp"
#include "spinbath/linsolve3.hpp"
#include "spinbath/types.hpp"

namespace spinbath::oracle {

// Matrix exponential by scaling-and-squaring with a Taylor kernel. Brute
// force on purpose: shares nothing with the closed-form solver it checks.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

// exp(-i M3 t) (1,0,0)^T for the sector generator M3.
AmplitudeTriple sector_expm(const SectorCoefficients& c, double t);

// Reduced state at time t obtained by building each three-state block
// Hamiltonian directly from the physical matrix elements, propagating the
// thermal ensemble state by state and tracing out the bath indices.
// Requires (M+1)*(N+1) <= 81.
Matrix4c projected_propagator(const ModelParams& params, const Matrix4c& rho0,
                              double t);

struct OracleReport {
  double max_abs_deviation = 0.0;
  std::string location;
};

// Propagates under the untruncated post-transformation Hamiltonian, which
// reaches |00> from |11> through sequential flips, and reports the largest
// element-wise deviation from the three-state-closure dynamics. Diagnostic
// only. Requires (M+1)*(N+1) <= 81.
OracleReport full_hp_deviation(const ModelParams& params, const Matrix4c& rho0,
                               std::span<const double> times);

}  // namespace spinbath::oracle
