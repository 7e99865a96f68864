#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace forest::cli {

/// Exit codes of `run`.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,    // bad flags, bad input files, validation errors
  kNumeric = 3,  // singular systems, exhausted walk budgets
};

/// Runs one forest-solve invocation. `args` excludes the program name.
/// Results go to `out`; a one-line diagnostic goes to `err` on failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace forest::cli
