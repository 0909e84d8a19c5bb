#include "spinbath/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinbath {

namespace {

// Spin signs (+1 excited, -1 ground) of the state seeding each sector.
struct Seed {
  int s1, s2;
};

Seed seed_of(Sector sector) {
  switch (sector) {
    case Sector::S11: return {+1, +1};
    case Sector::S10: return {+1, -1};
    case Sector::S01: return {-1, +1};
    case Sector::S00: return {-1, -1};
  }
  throw std::domain_error("unknown sector");
}

double system_energy(double omega1, double omega2, double delta, int s1,
                     int s2) {
  return 0.5 * (s1 * omega1 + s2 * omega2 + s1 * s2 * delta);
}

// sqrt(max(0, 1 - k/K)); the argument may exceed 1 for k < 0 and dips below
// 0 only through floating-point subtraction at the boundary occupations.
double coupling_radical(int size, int k) {
  return std::sqrt(
      std::max(0.0, 1.0 - static_cast<double>(k) / static_cast<double>(size)));
}

int basis_index(int s1, int s2) {
  // |11> = 0, |10> = 1, |01> = 2, |00> = 3
  return 2 * (s1 < 0) + (s2 < 0);
}

}  // namespace

void ModelParams::validate() const {
  auto fail = [](const std::string& what) {
    throw std::domain_error("ModelParams: " + what);
  };
  for (double v : {omega1, omega2, delta, omega_a, omega_b, eps1, eps2, T}) {
    if (!std::isfinite(v)) fail("non-finite parameter");
  }
  if (M < 1) fail("M must be >= 1");
  if (N < 1) fail("N must be >= 1");
  if (!(T > 0.0)) fail("T must be > 0");
  if (eps1 < 0.0) fail("eps1 must be >= 0");
  if (eps2 < 0.0) fail("eps2 must be >= 0");
}

double bath_mode_energy(double omega, int size, int occupation) {
  const double k = occupation;
  return omega * (k * (1.0 - (k - 1.0) / size) - 0.5);
}

SectorCoefficients sector_coefficients(const ModelParams& params,
                                       Sector sector, int m, int n) {
  if (m < 0 || m > params.M || n < 0 || n > params.N) {
    throw std::domain_error("sector_coefficients: occupation out of range");
  }
  const Seed s = seed_of(sector);

  // Diagonal entries: system energy of the block's three basis states plus
  // the bath energies at their occupations. The Y channel flips qubit 2 and
  // moves bath-2 occupation by s2; the Z channel does the same for qubit 1
  // and bath 1. The shifted occupancy enters both factors of the bath
  // energy; the small-bath propagator oracle pins this form.
  SectorCoefficients c{};
  const double ea_m = bath_mode_energy(params.omega_a, params.M, m);
  const double eb_n = bath_mode_energy(params.omega_b, params.N, n);
  c.a = system_energy(params.omega1, params.omega2, params.delta, s.s1, s.s2) +
        ea_m + eb_n;
  c.b = system_energy(params.omega1, params.omega2, params.delta, s.s1,
                      -s.s2) +
        ea_m + bath_mode_energy(params.omega_b, params.N, n + s.s2);
  c.c = system_energy(params.omega1, params.omega2, params.delta, -s.s1,
                      s.s2) +
        bath_mode_energy(params.omega_a, params.M, m + s.s1) + eb_n;

  // Couplings: emission (seed spin up) carries factor n+1 with the radical
  // at n; absorption carries factor n with the radical at n-1.
  const double rad_b = coupling_radical(params.N, s.s2 > 0 ? n : n - 1);
  const double rad_a = coupling_radical(params.M, s.s1 > 0 ? m : m - 1);
  c.d = params.eps2 * rad_b * (s.s2 > 0 ? n + 1 : n);
  c.f = params.eps2 * rad_b;
  c.e = params.eps1 * rad_a * (s.s1 > 0 ? m + 1 : m);
  c.g = params.eps1 * rad_a;
  return c;
}

std::pair<int, int> sector_transfer_weights(Sector sector, int m, int n) {
  const Seed s = seed_of(sector);
  return {s.s2 > 0 ? n + 1 : n, s.s1 > 0 ? m + 1 : m};
}

int sector_seed_index(Sector sector) {
  const Seed s = seed_of(sector);
  return basis_index(s.s1, s.s2);
}

int sector_y_index(Sector sector) {
  const Seed s = seed_of(sector);
  return basis_index(s.s1, -s.s2);
}

int sector_z_index(Sector sector) {
  const Seed s = seed_of(sector);
  return basis_index(-s.s1, s.s2);
}

}  // namespace spinbath
