#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cscpct {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNotConverged = 3,
};

/// Entry point of the `cscpct` tool. args[0] is the program name.
/// Subcommands: simulate, fit, benchmark, score.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cscpct
