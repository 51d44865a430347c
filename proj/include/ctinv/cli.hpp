#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctinv::cli {

enum ExitCode : int {
  kOk = 0,
  /// check: some error above the threshold.
  kAboveThreshold = 1,
  /// Bad arguments, malformed files, parity mismatch.
  kUsage = 2,
  /// Solver did not converge or hit a numerical error.
  kSolverFailure = 3,
};

/// Runs one subcommand (invert, synth, check, combine). args[0] is the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctinv::cli
