#pragma once

// The hardylab command line, callable in-process so tests can drive it.

#include <iosfwd>
#include <string>
#include <vector>

namespace hardylab::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kInvalidArguments = 2,
  kOptimizerFailure = 3,
  kCapExceeded = 4,
  kNoViolation = 5,
};

/// `args` excludes the program name. Human-readable results go to `out`,
/// diagnostics and the saved record path to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hardylab::cli
