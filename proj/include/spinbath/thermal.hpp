#pragma once

#include <vector>

#include "spinbath/model.hpp"

namespace spinbath {

// Boltzmann weights over bath occupations (m, n) and their partition sum.
// Weights are stored unnormalized; z is their sum in fixed (m outer,
// n inner, ascending) order. When the largest exponent would overflow a
// double, every exponent is shifted down by the maximum first; the shift is
// recorded in exponent_shift (0 otherwise) and all weight/z ratios are
// unaffected.
struct ThermalTable {
  int M = 0;
  int N = 0;
  std::vector<double> weights;  // (M+1)*(N+1), m-major
  double z = 0.0;
  double exponent_shift = 0.0;

  double weight(int m, int n) const { return weights[m * (N + 1) + n]; }
  double prob(int m, int n) const { return weight(m, n) / z; }
};

ThermalTable thermal_table(const ModelParams& params);

}  // namespace spinbath
