#include "spinbath/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace spinbath {

namespace {

constexpr double kPi = std::numbers::pi;

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// Entropy of a qubit state with unit trace and determinant det.
double entropy_from_det(double det) {
  const double gap = std::sqrt(std::max(0.0, 1.0 - 4.0 * det));
  return -xlog2x(0.5 * (1.0 + gap)) - xlog2x(0.5 * (1.0 - gap));
}

// Unnormalized post-measurement state of qubit 1 given direction w on
// qubit 2, and its probability.
struct Conditional {
  double p;
  double det_normalized;
};

Conditional conditional_state(const Matrix4c& rho, const complexd w[2]) {
  Matrix2c sigma = Matrix2c::Zero();
  for (int q1 = 0; q1 < 2; ++q1) {
    for (int q1p = 0; q1p < 2; ++q1p) {
      complexd acc = 0.0;
      for (int r = 0; r < 2; ++r) {
        for (int rp = 0; rp < 2; ++rp) {
          acc += std::conj(w[r]) * rho(2 * q1 + r, 2 * q1p + rp) * w[rp];
        }
      }
      sigma(q1, q1p) = acc;
    }
  }
  const double p = sigma(0, 0).real() + sigma(1, 1).real();
  if (p <= 1e-15) return {0.0, 0.0};
  const double det =
      (sigma(0, 0).real() * sigma(1, 1).real() - std::norm(sigma(0, 1))) /
      (p * p);
  return {p, det};
}

// sum_k p_k S(rho_1 | outcome k) for the measurement direction (theta, phi).
double conditional_entropy(const Matrix4c& rho, double theta, double phi) {
  const complexd ephi(std::cos(phi), std::sin(phi));
  const complexd u[2] = {complexd(std::cos(theta)), ephi * std::sin(theta)};
  const complexd v[2] = {complexd(std::sin(theta)), -ephi * std::cos(theta)};
  double total = 0.0;
  for (const auto* w : {u, v}) {
    const Conditional c = conditional_state(rho, w);
    if (c.p > 0.0) total += c.p * entropy_from_det(c.det_normalized);
  }
  return total;
}

MeasurementAngles canonical_angles(double theta, double phi) {
  // Fold through the Bloch direction of |u><u|; measurements are identified
  // with directions, so this maps any (theta, phi) into the stated ranges.
  const double nz = std::cos(2.0 * theta);
  const double nx = std::sin(2.0 * theta) * std::cos(phi);
  const double ny = std::sin(2.0 * theta) * std::sin(phi);
  MeasurementAngles out;
  out.theta = 0.5 * std::acos(std::clamp(nz, -1.0, 1.0));
  out.phi = std::hypot(nx, ny) < 1e-12 ? 0.0 : std::atan2(ny, nx);
  if (out.phi < 0.0) out.phi += 2.0 * kPi;
  return out;
}

}  // namespace

double trace_distance(const Matrix4c& rho, const Matrix4c& sigma) {
  Matrix4c diff = rho - sigma;
  diff = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double concurrence(const Matrix4c& rho) {
  Matrix4c y4 = Matrix4c::Zero();  // sigma_y (x) sigma_y
  y4(0, 3) = -1.0;
  y4(1, 2) = 1.0;
  y4(2, 1) = 1.0;
  y4(3, 0) = -1.0;
  const Matrix4c rho_tilde = y4 * rho.conjugate() * y4;

  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho);
  Eigen::Vector4d clamped = es.eigenvalues().cwiseMax(0.0);
  const Matrix4c sqrt_rho = es.eigenvectors() *
                            clamped.cwiseSqrt().asDiagonal() *
                            es.eigenvectors().adjoint();

  Matrix4c w = sqrt_rho * rho_tilde * sqrt_rho;
  w = 0.5 * (w + w.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> esw(w, Eigen::EigenvaluesOnly);
  Eigen::Vector4d l = esw.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  // Eigen returns ascending order; the largest is l[3].
  const double c = l[3] - l[2] - l[1] - l[0];
  return std::clamp(c, 0.0, 1.0);
}

double von_neumann_entropy(const Matrix4c& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double l = es.eigenvalues()[i];
    if (l < -1e-9) {
      throw std::domain_error("von_neumann_entropy: eigenvalue " +
                              std::to_string(l) + " below -1e-9");
    }
    s -= xlog2x(std::max(0.0, l));
  }
  return s;
}

double measured_conditional_entropy(const Matrix4c& rho,
                                    const MeasurementAngles& angles) {
  return conditional_entropy(rho, angles.theta, angles.phi);
}

DiscordResult discord(const Matrix4c& rho) {
  // S(rho_2) from the reduced state of the measured qubit.
  Matrix2c rho2 = Matrix2c::Zero();
  for (int q2 = 0; q2 < 2; ++q2) {
    for (int q2p = 0; q2p < 2; ++q2p) {
      rho2(q2, q2p) = rho(q2, q2p) + rho(2 + q2, 2 + q2p);
    }
  }
  const double det2 =
      (rho2(0, 0).real() * rho2(1, 1).real() - std::norm(rho2(0, 1)));
  const double s2 = entropy_from_det(det2);
  const double s12 = von_neumann_entropy(rho);

  // Coarse grid over the angle ranges, then Nelder-Mead refinement from the
  // best grid point. The returned minimum can only improve on the grid.
  constexpr int kThetaPoints = 65;
  constexpr int kPhiPoints = 128;
  const double dtheta = (kPi / 2.0) / (kThetaPoints - 1);
  const double dphi = (2.0 * kPi) / kPhiPoints;

  double best = std::numeric_limits<double>::infinity();
  double best_theta = 0.0, best_phi = 0.0;
  auto consider = [&](double theta, double phi) {
    const double value = conditional_entropy(rho, theta, phi);
    if (value < best) {
      best = value;
      best_theta = theta;
      best_phi = phi;
    }
    return value;
  };
  for (int i = 0; i < kThetaPoints; ++i) {
    for (int j = 0; j < kPhiPoints; ++j) {
      consider(i * dtheta, j * dphi);
    }
  }

  // Nelder-Mead on the unconstrained plane; any (theta, phi) is a valid
  // measurement direction, so no clamping is needed during the search.
  struct Vertex {
    double theta, phi, value;
  };
  std::array<Vertex, 3> simplex = {
      Vertex{best_theta, best_phi, best},
      Vertex{best_theta + dtheta, best_phi, 0.0},
      Vertex{best_theta, best_phi + dphi, 0.0}};
  simplex[1].value = consider(simplex[1].theta, simplex[1].phi);
  simplex[2].value = consider(simplex[2].theta, simplex[2].phi);

  auto by_value = [](const Vertex& a, const Vertex& b) {
    return a.value < b.value;
  };
  for (int iter = 0; iter < 200; ++iter) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    if (simplex[2].value - simplex[0].value < 1e-6) break;
    const double ct = 0.5 * (simplex[0].theta + simplex[1].theta);
    const double cp = 0.5 * (simplex[0].phi + simplex[1].phi);
    auto make = [&](double scale) {
      Vertex v{ct + scale * (simplex[2].theta - ct),
               cp + scale * (simplex[2].phi - cp), 0.0};
      v.value = consider(v.theta, v.phi);
      return v;
    };
    const Vertex reflected = make(-1.0);
    if (reflected.value < simplex[0].value) {
      const Vertex expanded = make(-2.0);
      simplex[2] = expanded.value < reflected.value ? expanded : reflected;
    } else if (reflected.value < simplex[1].value) {
      simplex[2] = reflected;
    } else {
      const Vertex contracted =
          make(reflected.value < simplex[2].value ? -0.5 : 0.5);
      if (contracted.value < std::min(simplex[2].value, reflected.value)) {
        simplex[2] = contracted;
      } else {
        // Shrink toward the best vertex.
        for (int i = 1; i < 3; ++i) {
          simplex[i].theta = 0.5 * (simplex[i].theta + simplex[0].theta);
          simplex[i].phi = 0.5 * (simplex[i].phi + simplex[0].phi);
          simplex[i].value = consider(simplex[i].theta, simplex[i].phi);
        }
      }
    }
  }

  DiscordResult result;
  result.value = s2 - s12 + best;
  result.angles = canonical_angles(best_theta, best_phi);
  return result;
}

std::vector<std::pair<double, double>> witness_trajectory(
    const ModelParams& params, const Matrix4c& rho0,
    std::span<const double> times) {
  const auto states = evolve_trajectory(params, rho0, times);
  std::vector<std::pair<double, double>> out(states.size());
  for (size_t i = 0; i < states.size(); ++i) {
    out[i] = {states[i].first, trace_distance(states[i].second, rho0)};
  }
  return out;
}

std::vector<std::pair<double, double>> global_local_gap(
    const ModelParams& params, const Matrix4c& rho0,
    std::span<const double> times) {
  if (times.empty()) {
    throw std::domain_error("global_local_gap: empty time grid");
  }
  validate_density_matrix(rho0, "global_local_gap: rho0");
  const MapEngine engine(params);
  const LocalMapEngine local1(params, 1);
  const LocalMapEngine local2(params, 2);

  std::vector<std::pair<double, double>> out(times.size());
  const int count = static_cast<int>(times.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    const double t = times[i];
    const Matrix4c global = evolve(engine.coefficients_serial(t), rho0);
    const Matrix4c local =
        local_product_evolve(local1.at(t), local2.at(t), rho0);
    out[i] = {t, trace_distance(global, local)};
  }
  return out;
}

std::vector<CorrelationRecord> correlation_trajectory(
    const ModelParams& params, const Matrix4c& rho0,
    std::span<const double> times) {
  const auto states = evolve_trajectory(params, rho0, times);
  std::vector<CorrelationRecord> out(states.size());
  const int count = static_cast<int>(states.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    const auto& [t, rho] = states[i];
    const DiscordResult d = discord(rho);
    out[i] = {t, concurrence(rho), std::max(0.0, d.value), d.angles};
  }
  return out;
}

bool has_max_then_min(std::span<const double> values, double eps) {
  bool seen_max = false;
  for (size_t i = 1; i + 1 < values.size(); ++i) {
    const bool strict_max =
        values[i] > values[i - 1] + eps && values[i] > values[i + 1] + eps;
    const bool strict_min =
        values[i] < values[i - 1] - eps && values[i] < values[i + 1] - eps;
    if (strict_max) seen_max = true;
    if (strict_min && seen_max) return true;
  }
  return false;
}

}  // namespace spinbath
