#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entrograph::cli {

/// Exit statuses of the command-line tool.
enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kInvalidInput = 2,
  kSolverFailure = 3,
  kPrecondition = 4,
  kVerifyFailed = 5,
};

/// Runs one command line (args[0] is the program name). Data goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entrograph::cli
