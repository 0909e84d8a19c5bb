#include "spinbath/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "spinbath/dynmap.hpp"
#include "spinbath/thermal.hpp"

namespace spinbath::oracle {

namespace {

// Bath-state bookkeeping for one closure block: the system index and the
// two bath occupations of each of the three coupled basis states.
struct BlockState {
  int sys, ma, nb;
  bool operator==(const BlockState&) const = default;
};

struct PhysicalBlock {
  Eigen::Matrix3d h;
  std::array<BlockState, 3> states;
};

double system_energy(const ModelParams& p, int sys) {
  const int s1 = sys < 2 ? +1 : -1;   // |11>,|10> have qubit 1 excited
  const int s2 = sys % 2 == 0 ? +1 : -1;
  return 0.5 * (s1 * p.omega1 + s2 * p.omega2 + s1 * s2 * p.delta);
}

double bath_energy(double omega, int size, int k) {
  return omega * (k * (1.0 - (k - 1.0) / size) - 0.5);
}

double radical(int size, int k) {
  return std::sqrt(std::max(0.0, 1.0 - double(k) / size));
}

// The three-state block seeded by |sys> at occupations (m, n), built from
// the physical matrix elements (symmetric basis, not the ansatz variables).
PhysicalBlock physical_block(const ModelParams& p, Sector sector, int m,
                             int n) {
  const int seed = sector_seed_index(sector);
  const bool q1_up = seed < 2;
  const bool q2_up = seed % 2 == 0;

  PhysicalBlock blk;
  const int nb_y = q2_up ? n + 1 : n - 1;
  const int ma_z = q1_up ? m + 1 : m - 1;
  blk.states = {BlockState{seed, m, n},
                BlockState{sector_y_index(sector), m, nb_y},
                BlockState{sector_z_index(sector), ma_z, n}};

  const double hy = q2_up ? p.eps2 * std::sqrt(n + 1.0) * radical(p.N, n)
                          : p.eps2 * std::sqrt(double(n)) * radical(p.N, n - 1);
  const double hz = q1_up ? p.eps1 * std::sqrt(m + 1.0) * radical(p.M, m)
                          : p.eps1 * std::sqrt(double(m)) * radical(p.M, m - 1);

  auto energy = [&](const BlockState& s) {
    return system_energy(p, s.sys) + bath_energy(p.omega_a, p.M, s.ma) +
           bath_energy(p.omega_b, p.N, s.nb);
  };
  blk.h << energy(blk.states[0]), hy, hz,
           hy, energy(blk.states[1]), 0.0,
           hz, 0.0, energy(blk.states[2]);
  return blk;
}

void check_bath_size(const ModelParams& p, const char* who) {
  if ((p.M + 1) * (p.N + 1) > 81) {
    throw std::domain_error(std::string(who) +
                            ": requires (M+1)*(N+1) <= 81 bath states");
  }
}

}  // namespace

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const Eigen::MatrixXcd b = a / std::pow(2.0, squarings);

  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(n, n) + b;
  Eigen::MatrixXcd term = b;
  for (int k = 2; k <= 64; ++k) {
    term = (term * b) / double(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

AmplitudeTriple sector_expm(const SectorCoefficients& c, double t) {
  const Eigen::Matrix3cd gen =
      complexd(0.0, -t) * sector_matrix(c).cast<complexd>();
  const Eigen::MatrixXcd u = expm(gen);
  return {u(0, 0), u(1, 0), u(2, 0)};
}

Matrix4c projected_propagator(const ModelParams& params, const Matrix4c& rho0,
                              double t) {
  params.validate();
  check_bath_size(params, "projected_propagator");
  validate_density_matrix(rho0, "projected_propagator: rho0");

  const ThermalTable table = thermal_table(params);
  Matrix4c out = Matrix4c::Zero();
  for (int m = 0; m <= params.M; ++m) {
    for (int n = 0; n <= params.N; ++n) {
      const double p = table.prob(m, n);

      std::array<PhysicalBlock, 4> blocks;
      std::array<Eigen::Vector3cd, 4> amps;
      for (int s = 0; s < 4; ++s) {
        blocks[s] = physical_block(params, kAllSectors[s], m, n);
        const Eigen::MatrixXcd u =
            expm(complexd(0.0, -t) * blocks[s].h.cast<complexd>());
        amps[s] = u.col(0);
      }

      // Partial trace over the bath: amplitude products survive only where
      // the bath occupations coincide.
      for (int si = 0; si < 4; ++si) {
        const int row_i = sector_seed_index(kAllSectors[si]);
        for (int sj = 0; sj < 4; ++sj) {
          const int row_j = sector_seed_index(kAllSectors[sj]);
          const complexd rho_ij = rho0(row_i, row_j);
          if (rho_ij == complexd(0.0, 0.0)) continue;
          for (int k = 0; k < 3; ++k) {
            for (int l = 0; l < 3; ++l) {
              const BlockState& a = blocks[si].states[k];
              const BlockState& b = blocks[sj].states[l];
              if (a.ma == b.ma && a.nb == b.nb) {
                out(a.sys, b.sys) +=
                    p * rho_ij * amps[si][k] * std::conj(amps[sj][l]);
              }
            }
          }
        }
      }
    }
  }
  return out;
}

OracleReport full_hp_deviation(const ModelParams& params, const Matrix4c& rho0,
                               std::span<const double> times) {
  params.validate();
  check_bath_size(params, "full_hp_deviation");
  validate_density_matrix(rho0, "full_hp_deviation: rho0");

  const int M = params.M, N = params.N;
  const int bath_dim = (M + 1) * (N + 1);
  const int dim = 4 * bath_dim;
  auto idx = [&](int sys, int m, int n) {
    return sys * bath_dim + m * (N + 1) + n;
  };

  // Full Hamiltonian after the bosonic mapping, without the three-state
  // closure: qubit flips pair with bath quanta in both directions, so
  // |11> reaches |00> through sequential flips.
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int sys = 0; sys < 4; ++sys) {
    for (int m = 0; m <= M; ++m) {
      for (int n = 0; n <= N; ++n) {
        h(idx(sys, m, n), idx(sys, m, n)) =
            system_energy(params, sys) + bath_energy(params.omega_a, M, m) +
            bath_energy(params.omega_b, N, n);
      }
    }
  }
  for (int m = 1; m <= M; ++m) {
    const double amp = params.eps1 * std::sqrt(double(m)) * radical(M, m - 1);
    for (int n = 0; n <= N; ++n) {
      // sigma_1+ a: |01> -> |11| and |00> -> |10> with one bath-1 quantum
      // absorbed.
      for (const auto [lo, hi] : {std::pair{2, 0}, std::pair{3, 1}}) {
        h(idx(hi, m - 1, n), idx(lo, m, n)) += amp;
        h(idx(lo, m, n), idx(hi, m - 1, n)) += amp;
      }
    }
  }
  for (int n = 1; n <= N; ++n) {
    const double amp = params.eps2 * std::sqrt(double(n)) * radical(N, n - 1);
    for (int m = 0; m <= M; ++m) {
      for (const auto [lo, hi] : {std::pair{1, 0}, std::pair{3, 2}}) {
        h(idx(hi, m, n - 1), idx(lo, m, n)) += amp;
        h(idx(lo, m, n), idx(hi, m, n - 1)) += amp;
      }
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::MatrixXcd evecs = es.eigenvectors().cast<complexd>();
  const ThermalTable table = thermal_table(params);
  const MapEngine engine(params);

  OracleReport report;
  for (const double t : times) {
    const Eigen::VectorXcd phases =
        (complexd(0.0, -t) * es.eigenvalues().cast<complexd>().array())
            .exp()
            .matrix();
    const Eigen::MatrixXcd u = evecs * phases.asDiagonal() * evecs.transpose();

    Matrix4c rho_full = Matrix4c::Zero();
    for (int m = 0; m <= M; ++m) {
      for (int n = 0; n <= N; ++n) {
        const double p = table.prob(m, n);
        for (int si = 0; si < 4; ++si) {
          for (int sj = 0; sj < 4; ++sj) {
            const complexd rho_ij = rho0(si, sj);
            if (rho_ij == complexd(0.0, 0.0)) continue;
            const auto col_i = u.col(idx(si, m, n));
            const auto col_j = u.col(idx(sj, m, n));
            for (int q = 0; q < 4; ++q) {
              for (int qp = 0; qp < 4; ++qp) {
                // dot() conjugates its left argument, so psi_j goes first.
                rho_full(q, qp) += p * rho_ij *
                                   col_j.segment(qp * bath_dim, bath_dim)
                                       .dot(col_i.segment(q * bath_dim,
                                                          bath_dim));
              }
            }
          }
        }
      }
    }

    const Matrix4c rho_ansatz = evolve(engine.coefficients_serial(t), rho0);
    for (int q = 0; q < 4; ++q) {
      for (int qp = 0; qp < 4; ++qp) {
        const double dev = std::abs(rho_full(q, qp) - rho_ansatz(q, qp));
        if (dev > report.max_abs_deviation) {
          report.max_abs_deviation = dev;
          report.location = "rho(" + std::to_string(q + 1) + "," +
                            std::to_string(qp + 1) + ") at t = " +
                            std::to_string(t);
        }
      }
    }
  }
  return report;
}

}  // namespace spinbath::oracle
