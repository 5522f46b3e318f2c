#pragma once

#include <iosfwd>

namespace modalkit {

/// Exit codes of the command-line tool.
enum ExitStatus : int {
  kHolds = 0,        // property holds, formula valid, or no countermodel in range
  kRefuted = 1,      // countermodel or refutation found
  kUsageError = 2,   // usage, parse, or model validation error
  kResourceLimit = 3,
};

/// Runs the `modalkit` command line; returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace modalkit
