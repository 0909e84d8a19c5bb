#pragma once

#include <string>
#include <vector>

#include "spinbath/config.hpp"

namespace spinbath {

// Exit codes: 0 success, 1 usage/config error, 2 invariant violation or
// oracle disagreement at run time.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

// Dispatches one subcommand on a validated config. `choi_time` applies to
// the choi/kraus dumps, `bath_size` to oracle-check.
int run_subcommand(const std::string& subcommand, RunConfig config,
                   double choi_time, int bath_size);

// Full argv-level entry point (parsing, config/preset resolution, thread
// setup); what main() calls and what the tests drive.
int run_cli(const std::vector<std::string>& args);

}  // namespace spinbath
