#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace klpath::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kInvalidConfig = 2,
  kHypothesisViolation = 3,
};

/// Runs the tool on `args` (without the program name), writing normal output
/// to `out` and diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace klpath::cli
