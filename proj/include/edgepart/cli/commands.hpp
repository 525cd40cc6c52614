#pragma once

#include "edgepart/sim.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace edgepart::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,        ///< invalid input or I/O failure
    kExitUsage = 2,        ///< bad command line
    kExitFlagBudget = 3,   ///< too many trials failed to converge
};

/// Entry point shared by the binary and the tests. `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Everything that determines a sweep's numbers, one `key = value` per line.
std::string resolved_config_text(const SweepSpec& spec);

} // namespace edgepart::cli
