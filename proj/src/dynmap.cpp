#include "spinbath/dynmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spinbath {

namespace {

// Flat position of the (i, j) coherence, i < j, in MapCoefficients::coh.
constexpr int kCohIndex[4][4] = {{-1, 0, 1, 2},
                                 {0, -1, 3, 4},
                                 {1, 3, -1, 5},
                                 {2, 4, 5, -1}};

struct Accum {
  double pop[4][4] = {};
  complexd coh[6] = {};

  Accum& operator+=(const Accum& o) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) pop[i][j] += o.pop[i][j];
    for (int k = 0; k < 6; ++k) coh[k] += o.coh[k];
    return *this;
  }
};

}  // namespace

complexd MapCoefficients::coherence(int i, int j) const {
  const int k = kCohIndex[i][j];
  if (k < 0) throw std::domain_error("coherence: need i != j");
  return i < j ? coh[k] : std::conj(coh[k]);
}

MapEngine::MapEngine(const ModelParams& params)
    : params_(params), table_(thermal_table(params)) {
  const int M = params_.M, N = params_.N;
  blocks_.resize(static_cast<size_t>(M + 1) * (N + 1));
#pragma omp parallel for schedule(static)
  for (int m = 0; m <= M; ++m) {
    for (int n = 0; n <= N; ++n) {
      Block& blk = blocks_[static_cast<size_t>(m) * (N + 1) + n];
      blk.weight = table_.weight(m, n);
      for (int s = 0; s < 4; ++s) {
        blk.sol[s] =
            solve_sector(sector_coefficients(params_, kAllSectors[s], m, n));
      }
    }
  }
}

MapCoefficients MapEngine::reduce(double t, bool parallel) const {
  const int M = params_.M, N = params_.N;
  // One partial sum per m-row, combined in ascending order afterwards:
  // the result does not depend on the thread count.
  std::vector<Accum> rows(M + 1);
#pragma omp parallel for schedule(static) if (parallel)
  for (int m = 0; m <= M; ++m) {
    Accum acc;
    for (int n = 0; n <= N; ++n) {
      const Block& blk = blocks_[static_cast<size_t>(m) * (N + 1) + n];
      const double w = blk.weight;

      complexd seed_amp[4];
      for (int s = 0; s < 4; ++s) {
        const Sector sector = kAllSectors[s];
        const AmplitudeTriple amp = amplitudes_at(blk.sol[s], t);
        const auto [wy, wz] = sector_transfer_weights(sector, m, n);
        const int from = sector_seed_index(sector);
        acc.pop[from][from] += w * std::norm(amp.x);
        acc.pop[sector_y_index(sector)][from] += w * wy * std::norm(amp.y);
        acc.pop[sector_z_index(sector)][from] += w * wz * std::norm(amp.z);
        seed_amp[from] = amp.x;
      }
      int k = 0;
      for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
          acc.coh[k++] += w * seed_amp[i] * std::conj(seed_amp[j]);
        }
      }
    }
    rows[m] = acc;
  }

  Accum total;
  for (int m = 0; m <= M; ++m) total += rows[m];

  MapCoefficients out;
  out.t = t;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out.pop(i, j) = total.pop[i][j] / table_.z;
  }
  for (int k = 0; k < 6; ++k) out.coh[k] = total.coh[k] / table_.z;
  return out;
}

MapCoefficients MapEngine::coefficients(double t) const {
  return reduce(t, true);
}

MapCoefficients MapEngine::coefficients_serial(double t) const {
  return reduce(t, false);
}

MapCoefficients map_coefficients(const ModelParams& params, double t) {
  return MapEngine(params).coefficients(t);
}

Matrix4c evolve(const MapCoefficients& coeffs, const Matrix4c& rho0) {
  validate_density_matrix(rho0, "evolve: rho0");
  Matrix4c out = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out(i, i) += coeffs.pop(i, j) * rho0(j, j).real();
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      out(i, j) = coeffs.coherence(i, j) * rho0(i, j);
      out(j, i) = std::conj(out(i, j));
    }
  }
  return out;
}

std::vector<std::pair<double, Matrix4c>> evolve_trajectory(
    const ModelParams& params, const Matrix4c& rho0,
    std::span<const double> times) {
  if (times.empty()) {
    throw std::domain_error("evolve_trajectory: empty time grid");
  }
  if (!std::is_sorted(times.begin(), times.end())) {
    throw std::domain_error("evolve_trajectory: times must be ascending");
  }
  validate_density_matrix(rho0, "evolve_trajectory: rho0");

  const MapEngine engine(params);
  std::vector<std::pair<double, Matrix4c>> out(times.size());
  const int count = static_cast<int>(times.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    out[i] = {times[i], evolve(engine.coefficients_serial(times[i]), rho0)};
  }
  return out;
}

namespace {

// Amplitudes of one two-level closure block [[a, e], [g, c]] with X(0)=1,
// Z(0)=0. Eigenvalues are real (e*g >= 0); the quadratic-degenerate case
// only occurs with e*g = 0.
struct TwoLevelAmps {
  complexd x, z;
};

}  // namespace

LocalMapEngine::LocalMapEngine(const ModelParams& params, int which)
    : which_(which) {
  params.validate();
  if (which != 1 && which != 2) {
    throw std::domain_error("LocalMapEngine: qubit index must be 1 or 2");
  }
  const double omega = which == 1 ? params.omega1 : params.omega2;
  const double omega_bath = which == 1 ? params.omega_a : params.omega_b;
  const double eps = which == 1 ? params.eps1 : params.eps2;
  size_ = which == 1 ? params.M : params.N;

  weight_.resize(size_ + 1);
  std::vector<double> exponent(size_ + 1);
  double max_exponent = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= size_; ++k) {
    exponent[k] = -bath_mode_energy(omega_bath, size_, k) / params.T;
    max_exponent = std::max(max_exponent, exponent[k]);
  }
  for (int k = 0; k <= size_; ++k) {
    // Only the ratios weight/z are used; shifting by the maximum exponent
    // keeps them finite at low temperature.
    weight_[k] = std::exp(exponent[k] - max_exponent);
    z_ += weight_[k];
  }

  auto make_block = [&](double a, double c, double e, double g) {
    TwoLevelBlock blk{};
    blk.a = a;
    blk.c = c;
    blk.g = g;
    const double disc = std::sqrt((a - c) * (a - c) + 4.0 * e * g);
    blk.lambda1 = 0.5 * ((a + c) + disc);
    blk.lambda2 = 0.5 * ((a + c) - disc);
    const double scale = std::max({1.0, std::abs(a), std::abs(c), e, g});
    blk.degenerate = disc < 1e-9 * scale;
    return blk;
  };

  excited_.reserve(size_ + 1);
  ground_.reserve(size_ + 1);
  for (int k = 0; k <= size_; ++k) {
    // Excited closure: |1, k> couples to |0, k+1>.
    const double rad_up = std::sqrt(std::max(0.0, 1.0 - double(k) / size_));
    excited_.push_back(make_block(
        0.5 * omega + bath_mode_energy(omega_bath, size_, k),
        -0.5 * omega + bath_mode_energy(omega_bath, size_, k + 1),
        eps * rad_up * (k + 1), eps * rad_up));
    // Ground closure: |0, k> couples to |1, k-1>.
    const double rad_down =
        std::sqrt(std::max(0.0, 1.0 - double(k - 1) / size_));
    ground_.push_back(make_block(
        -0.5 * omega + bath_mode_energy(omega_bath, size_, k),
        0.5 * omega + bath_mode_energy(omega_bath, size_, k - 1),
        eps * rad_down * k, eps * rad_down));
  }
}

namespace {

TwoLevelAmps two_level_amplitudes(double a, double c, double g, double l1,
                                  double l2, bool degenerate, double t) {
  auto phase = [](double lt) { return complexd(std::cos(lt), -std::sin(lt)); };
  if (degenerate) {
    // a == c and e*g == 0 up to tolerance: X is a pure phase and Z is the
    // resonantly driven solution.
    const complexd px = phase(a * t);
    return {px, complexd(0.0, -g * t) * px};
  }
  const complexd p1 = phase(l1 * t), p2 = phase(l2 * t);
  const double inv = 1.0 / (l1 - l2);
  return {((l1 - c) * p1 - (l2 - c) * p2) * inv, g * (p1 - p2) * inv};
}

}  // namespace

LocalMap LocalMapEngine::at(double t) const {
  LocalMap lm;
  lm.which = which_;
  lm.t = t;
  double stay_e = 0.0, decay = 0.0, stay_g = 0.0, absorb = 0.0;
  complexd coh = 0.0;
  for (int k = 0; k <= size_; ++k) {
    const auto& eb = excited_[k];
    const auto& gb = ground_[k];
    const TwoLevelAmps ea = two_level_amplitudes(eb.a, eb.c, eb.g, eb.lambda1,
                                                 eb.lambda2, eb.degenerate, t);
    const TwoLevelAmps ga = two_level_amplitudes(gb.a, gb.c, gb.g, gb.lambda1,
                                                 gb.lambda2, gb.degenerate, t);
    const double w = weight_[k];
    stay_e += w * std::norm(ea.x);
    decay += w * (k + 1) * std::norm(ea.z);
    stay_g += w * std::norm(ga.x);
    absorb += w * k * std::norm(ga.z);
    coh += w * ea.x * std::conj(ga.x);
  }
  lm.stay_excited = stay_e / z_;
  lm.decay = decay / z_;
  lm.stay_ground = stay_g / z_;
  lm.absorb = absorb / z_;
  lm.coherence = coh / z_;
  return lm;
}

LocalMap local_map(const ModelParams& params, int which, double t) {
  return LocalMapEngine(params, which).at(t);
}

Matrix4c local_product_evolve(const LocalMap& lm1, const LocalMap& lm2,
                              const Matrix4c& rho0) {
  if (lm1.which != 1 || lm2.which != 2) {
    throw std::domain_error("local_product_evolve: expected maps for qubit 1 "
                            "and qubit 2 in that order");
  }
  if (lm1.t != lm2.t) {
    throw std::domain_error("local_product_evolve: maps at different times");
  }
  validate_density_matrix(rho0, "local_product_evolve: rho0");

  // Single-qubit superoperators on indices (i, j), 0 = |1>, 1 = |0>.
  auto superop = [](const LocalMap& lm) {
    Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
    auto at = [&s](int i, int j, int k, int l) -> complexd& {
      return s(2 * i + j, 2 * k + l);
    };
    at(0, 0, 0, 0) = lm.stay_excited;
    at(0, 0, 1, 1) = lm.absorb;
    at(1, 1, 0, 0) = lm.decay;
    at(1, 1, 1, 1) = lm.stay_ground;
    at(0, 1, 0, 1) = lm.coherence;
    at(1, 0, 1, 0) = std::conj(lm.coherence);
    return s;
  };
  const Eigen::Matrix4cd s1 = superop(lm1);
  const Eigen::Matrix4cd s2 = superop(lm2);

  Matrix4c out = Matrix4c::Zero();
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 2; ++i2)
      for (int j1 = 0; j1 < 2; ++j1)
        for (int j2 = 0; j2 < 2; ++j2)
          for (int k1 = 0; k1 < 2; ++k1)
            for (int k2 = 0; k2 < 2; ++k2)
              for (int l1 = 0; l1 < 2; ++l1)
                for (int l2 = 0; l2 < 2; ++l2) {
                  const complexd f = s1(2 * i1 + j1, 2 * k1 + l1) *
                                     s2(2 * i2 + j2, 2 * k2 + l2);
                  if (f != complexd(0.0, 0.0)) {
                    out(2 * i1 + i2, 2 * j1 + j2) +=
                        f * rho0(2 * k1 + k2, 2 * l1 + l2);
                  }
                }
  return out;
}

}  // namespace spinbath
