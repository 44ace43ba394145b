#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "nowcast/app/run_config.hpp"

namespace nowcast::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;  ///< bad flags, config or input files
inline constexpr int kExitFailed = 2;   ///< runtime failure

/**
 * Runs one subcommand. `args` excludes the program name, e.g.
 * {"analyze", "--input", "prices.csv"}. Output goes to `out`, diagnostics
 * to `err`.
 */
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The validated RunConfig an analyze, replay or live command line (plus
/// its --config file) would run with. Throws ConfigError.
RunConfig parse_run_config(const std::vector<std::string>& args);

}  // namespace nowcast::app
