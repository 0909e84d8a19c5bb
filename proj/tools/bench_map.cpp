// Timing comparison of the OpenMP map kernel against the serial reference,
// plus the end-to-end witness trajectory. Usage: spinbath_bench [M=N] [reps].

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "spinbath/analysis.hpp"
#include "spinbath/dynmap.hpp"

using namespace spinbath;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int size = argc > 1 ? std::atoi(argv[1]) : 100;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 20;
  ModelParams params{2.0, 1.9, 2.5, 1.1, 1.2, 2.6, 2.5, size, size, 1.0};

  auto t0 = clock_type::now();
  const MapEngine engine(params);
  std::printf("engine build (M = N = %d): %.3f s\n", size, seconds_since(t0));

  const std::vector<double> probe_times = {0.5, 1.0, 2.0, 5.0, 10.0};

  t0 = clock_type::now();
  MapCoefficients serial_out;
  for (int r = 0; r < reps; ++r) {
    for (double t : probe_times) serial_out = engine.coefficients_serial(t);
  }
  const double serial = seconds_since(t0);

  t0 = clock_type::now();
  MapCoefficients parallel_out;
  for (int r = 0; r < reps; ++r) {
    for (double t : probe_times) parallel_out = engine.coefficients(t);
  }
  const double parallel = seconds_since(t0);

  const int evals = reps * static_cast<int>(probe_times.size());
  std::printf("map coefficients, %d evaluations:\n", evals);
  std::printf("  serial reference: %.3f s (%.2f ms/eval)\n", serial,
              1e3 * serial / evals);
  std::printf("  OpenMP x%-8d: %.3f s (%.2f ms/eval)  speedup %.2fx\n",
              omp_get_max_threads(), parallel, 1e3 * parallel / evals,
              serial / parallel);
  const double drift =
      (serial_out.pop - parallel_out.pop).cwiseAbs().maxCoeff();
  std::printf("  kernel agreement: max |delta| = %g\n", drift);

  std::vector<double> grid(200);
  for (size_t i = 0; i < grid.size(); ++i) grid[i] = 10.0 * i / (grid.size() - 1);
  t0 = clock_type::now();
  const auto witness = witness_trajectory(params, state_11(), grid);
  std::printf("witness trajectory, %zu points: %.3f s (last D = %.6f)\n",
              grid.size(), seconds_since(t0), witness.back().second);
  return 0;
}
