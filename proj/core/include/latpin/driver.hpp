#pragma once

#include <ostream>

#include "latpin/config.hpp"

namespace latpin {

/// Exit codes of the command layer.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Executes one subcommand: validates the config, computes, and writes the
/// CSV (and optional JSON mirror) to cfg.output or to `out` when the path is
/// empty. Diagnostics go to `log`. Returns an exit code instead of throwing.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& log);

}  // namespace latpin
