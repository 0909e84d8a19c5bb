#pragma once

#include <span>
#include <utility>
#include <vector>

#include "spinbath/dynmap.hpp"
#include "spinbath/types.hpp"

namespace spinbath {

// Trace distance 0.5 * ||rho - sigma||_1 of two density matrices.
double trace_distance(const Matrix4c& rho, const Matrix4c& sigma);

// Wootters concurrence of a two-qubit state.
double concurrence(const Matrix4c& rho);

// Von Neumann entropy in bits. Eigenvalues in [-1e-9, 0) are clamped to 0;
// anything more negative throws std::domain_error.
double von_neumann_entropy(const Matrix4c& rho);

// Projective measurement direction on qubit 2:
// |u> = cos(theta)|1> + e^{i phi} sin(theta)|0>.
struct MeasurementAngles {
  double theta = 0.0;  // [0, pi/2]
  double phi = 0.0;    // [0, 2 pi)
};

struct DiscordResult {
  double value = 0.0;  // may sit a hair below 0 for zero-discord states
  MeasurementAngles angles;
};

// sum_k p_k S(rho_1 | outcome k) for a projective measurement of qubit 2
// along (theta, phi); the objective the discord minimization runs over.
double measured_conditional_entropy(const Matrix4c& rho,
                                    const MeasurementAngles& angles);

// Quantum discord S(rho_2) - S(rho_12) + min_{theta,phi} sum_k p_k S(rho_1|k)
// with the measurement on qubit 2. The minimization runs a 65 x 128 grid
// over the angle ranges followed by Nelder-Mead refinement to 1e-6 in the
// objective; the refined value is never above the grid value.
DiscordResult discord(const Matrix4c& rho);

struct CorrelationRecord {
  double t = 0.0;
  double concurrence = 0.0;
  double discord = 0.0;  // clamped to >= 0
  MeasurementAngles argmin_angles;
};

// D(rho(t), rho(0)) along a trajectory; non-monotonic stretches witness
// memory effects.
std::vector<std::pair<double, double>> witness_trajectory(
    const ModelParams& params, const Matrix4c& rho0,
    std::span<const double> times);

// D(Lambda_12(rho0), Lambda_1 (x) Lambda_2 (rho0)) along a trajectory.
std::vector<std::pair<double, double>> global_local_gap(
    const ModelParams& params, const Matrix4c& rho0,
    std::span<const double> times);

// Concurrence and discord along a trajectory.
std::vector<CorrelationRecord> correlation_trajectory(
    const ModelParams& params, const Matrix4c& rho0,
    std::span<const double> times);

// True when the series has a strict local maximum (above both neighbours by
// more than eps) followed by a strict local minimum.
bool has_max_then_min(std::span<const double> values, double eps = 1e-6);

}  // namespace spinbath
