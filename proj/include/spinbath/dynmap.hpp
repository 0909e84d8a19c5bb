#pragma once

#include <span>
#include <utility>
#include <vector>

#include "spinbath/linsolve3.hpp"
#include "spinbath/model.hpp"
#include "spinbath/thermal.hpp"
#include "spinbath/types.hpp"

namespace spinbath {

// Thermally averaged transfer data of the dynamical map at one time.
//
// pop(to, from) is the population flow |from><from| -> |to><to|; its columns
// each sum to 1 and the double-flip channels pop(3,0), pop(0,3), pop(2,1),
// pop(1,2) are structurally zero. coherence(i, j) multiplies the initial
// off-diagonal element rho_ij(0), i < j.
struct MapCoefficients {
  double t = 0.0;
  Eigen::Matrix4d pop = Eigen::Matrix4d::Zero();
  std::array<complexd, 6> coh{};  // (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)

  complexd coherence(int i, int j) const;
};

// Precomputes the eigensystem of every (sector, m, n) block once, so the
// map can be evaluated at any number of times afterwards. Construction runs
// the blocks in parallel; the finished engine is immutable and shareable.
class MapEngine {
 public:
  explicit MapEngine(const ModelParams& params);

  // Thermal reduction over (m, n). The OpenMP kernel accumulates one
  // partial sum per m-row and combines the rows in ascending order, so the
  // result is bit-identical for any thread count and to the serial kernel.
  MapCoefficients coefficients(double t) const;
  // Serial reference kernel (same reduction order), kept for testing and
  // benchmarking against the parallel one.
  MapCoefficients coefficients_serial(double t) const;

  const ModelParams& params() const { return params_; }
  const ThermalTable& thermal() const { return table_; }

 private:
  struct Block {
    std::array<SectorSolution, 4> sol;  // indexed by kAllSectors order
    double weight = 0.0;                // unnormalized thermal weight
  };

  MapCoefficients reduce(double t, bool parallel) const;

  ModelParams params_;
  ThermalTable table_;
  std::vector<Block> blocks_;  // (M+1)*(N+1), m-major
};

// Convenience wrapper: builds an engine and evaluates once.
MapCoefficients map_coefficients(const ModelParams& params, double t);

// Applies the map to an initial state (which must satisfy the density
// matrix invariants, else std::domain_error).
Matrix4c evolve(const MapCoefficients& coeffs, const Matrix4c& rho0);

// Trajectory over an ascending, nonempty time grid; the sector eigensystems
// are computed once and shared by all points. Time points run in parallel.
std::vector<std::pair<double, Matrix4c>> evolve_trajectory(
    const ModelParams& params, const Matrix4c& rho0,
    std::span<const double> times);

// Single-qubit map of qubit `which`, obtained by the same exact method
// applied to that qubit and its own bath alone: the partner qubit's
// splitting, the inter-qubit coupling and the partner bath drop out, each
// 3x3 block reduces to a 2x2 block, and the thermal average runs over the
// qubit's own bath only.
struct LocalMap {
  int which = 1;  // 1 or 2
  double t = 0.0;
  double stay_excited = 1.0;  // |1><1| -> |1><1|
  double decay = 0.0;         // |1><1| -> |0><0|
  double stay_ground = 1.0;   // |0><0| -> |0><0|
  double absorb = 0.0;        // |0><0| -> |1><1|
  complexd coherence{1.0, 0.0};
};

class LocalMapEngine {
 public:
  LocalMapEngine(const ModelParams& params, int which);
  LocalMap at(double t) const;

 private:
  struct TwoLevelBlock {
    double lambda1, lambda2;  // eigenvalues of [[a, e], [g, c]]
    double a, c, g;
    bool degenerate;
  };

  int which_;
  int size_;  // occupations 0..size_
  std::vector<double> weight_;
  double z_ = 0.0;
  std::vector<TwoLevelBlock> excited_, ground_;
};

LocalMap local_map(const ModelParams& params, int which, double t);

// Applies Lambda_1 (x) Lambda_2 to rho0. The two maps must be for qubits 1
// and 2 at the same time, else std::domain_error.
Matrix4c local_product_evolve(const LocalMap& lm1, const LocalMap& lm2,
                              const Matrix4c& rho0);

}  // namespace spinbath
