#include "spinbath/thermal.hpp"

#include <cmath>
#include <limits>

namespace spinbath {

ThermalTable thermal_table(const ModelParams& params) {
  params.validate();
  const int M = params.M, N = params.N;

  ThermalTable table;
  table.M = M;
  table.N = N;
  table.weights.resize(static_cast<size_t>(M + 1) * (N + 1));

  // Exponents first, so the maximum can be subtracted when it would
  // otherwise overflow the exponential (large omega/T). The shift leaves
  // every weight/z ratio unchanged.
  std::vector<double> exponent(table.weights.size());
  double max_exponent = -std::numeric_limits<double>::infinity();
  for (int m = 0; m <= M; ++m) {
    for (int n = 0; n <= N; ++n) {
      const double e = -(bath_mode_energy(params.omega_a, M, m) +
                         bath_mode_energy(params.omega_b, N, n)) /
                       params.T;
      exponent[static_cast<size_t>(m) * (N + 1) + n] = e;
      max_exponent = std::max(max_exponent, e);
    }
  }
  constexpr double kOverflowGuard = 600.0;  // exp(709) is the double limit
  table.exponent_shift = max_exponent > kOverflowGuard ? max_exponent : 0.0;

  double z = 0.0;
  for (int m = 0; m <= M; ++m) {
    for (int n = 0; n <= N; ++n) {
      const size_t idx = static_cast<size_t>(m) * (N + 1) + n;
      table.weights[idx] = std::exp(exponent[idx] - table.exponent_shift);
      z += table.weights[idx];
    }
  }
  table.z = z;
  return table;
}

}  // namespace spinbath
