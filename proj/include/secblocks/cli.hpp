#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace secblocks {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitViolations = 1,
  kExitConfig = 2,
  kExitRuntime = 3,
};

/// Runs one command line (without the program name). Primary output goes to
/// `out` unless --output names a file; failures print one line to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace secblocks
