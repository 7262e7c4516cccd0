#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hypmin::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kSolverError = 2,
  kCertificationFailed = 3,
  kEstimationFailed = 4,
};

/// Runs `hypmin <subcommand> [flags]`. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypmin::cli
