#pragma once

#include <array>
#include <utility>

#include <Eigen/Dense>

namespace spinbath {

// Physical constants of the two-qubit / two-spin-bath model, in units with
// hbar = k_B = 1.
struct ModelParams {
  double omega1;   // qubit-1 level splitting
  double omega2;   // qubit-2 level splitting
  double delta;    // qubit-qubit sigma_z sigma_z coupling
  double omega_a;  // bath-1 mode frequency
  double omega_b;  // bath-2 mode frequency
  double eps1;     // qubit-1 <-> bath-1 coupling, >= 0
  double eps2;     // qubit-2 <-> bath-2 coupling, >= 0
  int M;           // bath-1 spin count, >= 1
  int N;           // bath-2 spin count, >= 1
  double T;        // temperature, > 0

  // Throws std::domain_error on the first violated constraint.
  void validate() const;
};

// Each sector is the closed three-amplitude subspace seeded by one system
// basis state (per bath occupation pair). S11 <-> |11>, S10 <-> |10>,
// S01 <-> |01>, S00 <-> |00>.
enum class Sector { S11, S10, S01, S00 };

inline constexpr std::array<Sector, 4> kAllSectors = {
    Sector::S11, Sector::S10, Sector::S01, Sector::S00};

// Entries of the 3x3 generator [[a, d, e], [f, b, 0], [g, 0, c]] of one
// (sector, m, n) amplitude block.
struct SectorCoefficients {
  double a, b, c, d, e, f, g;
};

// Energy of a truncated collective bath mode at occupation k:
// omega * (k * (1 - (k-1)/K) - 1/2). Valid for any integer k; the
// occupation range checks live at the call sites.
double bath_mode_energy(double omega, int size, int occupation);

// The seven generator entries for the given sector and bath occupations
// (0 <= m <= M, 0 <= n <= N, else std::domain_error). Pure function; all
// square roots are evaluated as sqrt(max(0, .)).
SectorCoefficients sector_coefficients(const ModelParams& params,
                                       Sector sector, int m, int n);

// Integer factors converting squared ansatz amplitudes |Y|^2, |Z|^2 into
// physical populations: (wy, wz) with wy = n+1 or n and wz = m+1 or m
// depending on whether the sector emits into or absorbs from each bath.
// Equal to d/f and e/g whenever f, g > 0.
std::pair<int, int> sector_transfer_weights(Sector sector, int m, int n);

// Basis index (0..3) of the state that seeds the sector.
int sector_seed_index(Sector sector);
// Basis index of the state reached through the bath-2 (Y) channel.
int sector_y_index(Sector sector);
// Basis index of the state reached through the bath-1 (Z) channel.
int sector_z_index(Sector sector);

}  // namespace spinbath
