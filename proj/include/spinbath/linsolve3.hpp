#pragma once

#include <array>

#include <Eigen/Dense>

#include "spinbath/model.hpp"
#include "spinbath/types.hpp"

namespace spinbath {

// a1 x^3 + b1 x^2 + c1 x + d1 = 0, a1 != 0.
struct CubicCoefficients {
  double a1, b1, c1, d1;
};

// All three roots via the discriminant/Q closed form, ordered by ascending
// real part, ties broken by ascending imaginary part. Throws
// std::domain_error when a1 == 0.
std::array<complexd, 3> solve_cubic(const CubicCoefficients& c);

// Eigensystem and boundary weights of one sector block. Immutable once
// filled; safe to share across threads.
struct SectorSolution {
  std::array<double, 3> lambdas{};             // ascending
  std::array<Eigen::Vector3d, 3> vecs{};       // (alpha_j, beta_j, gamma_j)
  std::array<complexd, 3> weights{};           // v_j
  bool degenerate_fallback_used = false;
};

// (X(t), Y(t), Z(t)) of one sector block.
struct AmplitudeTriple {
  complexd x, y, z;
};

// The real generator [[a, d, e], [f, b, 0], [g, 0, c]].
Eigen::Matrix3d sector_matrix(const SectorCoefficients& c);

// Eigenvalues via the cubic closed form and eigenvectors via
// ((l-b)(l-c), f(l-c), g(l-b)). Falls back to the dense numeric path when
// any eigenvalue sits within 1e-9*scale of b, c or of another eigenvalue
// (scale = max(1, max |coefficient|)). Weights are not yet filled.
SectorSolution sector_eigensystem(const SectorCoefficients& c);

// Dense QR eigensolve of the real 3x3 generator; the fallback path, exposed
// so the two routes can be cross-checked on non-degenerate inputs.
SectorSolution sector_eigensystem_numeric(const SectorCoefficients& c);

// Fills the weights v_j from the boundary conditions X(0)=1, Y(0)=0, Z(0)=0.
// Uses the closed-form quotients; a vanishing denominator (or a solution
// already on the numeric path) routes to a direct 3x3 linear solve.
SectorSolution boundary_weights(SectorSolution sol);

// sector_eigensystem + boundary_weights.
SectorSolution solve_sector(const SectorCoefficients& c);

// (X, Y, Z)(t) = sum_j v_j e^{-i lambda_j t} (alpha_j, beta_j, gamma_j).
AmplitudeTriple amplitudes_at(const SectorSolution& sol, double t);

}  // namespace spinbath
