#pragma once

#include <string>
#include <vector>

#include "spinbath/model.hpp"
#include "spinbath/types.hpp"

namespace spinbath {

inline constexpr int kConfigSchemaVersion = 1;

// One run description, loaded from a versioned JSON document.
struct RunConfig {
  ModelParams params{};
  std::string initial_state_name;  // "11", "10", "bell", or "" for explicit
  Matrix4c initial_state = Matrix4c::Zero();
  double t_max = 10.0;
  int t_steps = 1000;
  std::vector<std::string> outputs;  // subset of {"trace_distance",
                                     // "concurrence","discord","gap","rho"}
  std::string output_path;
  int threads = 1;

  // t_steps points from 0 to t_max inclusive.
  std::vector<double> time_grid() const;
  // Throws std::domain_error on bad ranges or an invalid initial state.
  void validate() const;
};

// Resolves "11", "10" or "bell"; throws std::domain_error otherwise.
Matrix4c named_state(const std::string& name);

// Built-in configurations; names: fig2a, fig2b, fig3a, fig3b, fig4.
RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

// JSON round trip. load_config throws std::invalid_argument with a
// line:column reference on parse errors and std::domain_error on invalid
// content.
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& config, const std::string& path);

// Shortest decimal form that round-trips a double ("%.17g").
std::string format_full(double v);

}  // namespace spinbath
