#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mdrank {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitValidation = 2,
  kExitUsage = 64,
};

/// Runs the command line `args` (args[0] is the program name). Reports and
/// rendered tables go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mdrank
