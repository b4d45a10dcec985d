#pragma once

#include <string>
#include <vector>

#include "iterlab/real.hpp"

namespace iterlab::cli {

enum ExitCode : int {
  kSuccess = 0,
  kNumericFailure = 2,
  kUsage = 64,
};

struct CommandResult {
  int exit_code = kSuccess;
  std::string out;  ///< report written to stdout (empty when --out is used)
  std::string err;  ///< diagnostics for stderr
};

/// Runs one invocation. `args` excludes the program name, e.g.
/// {"cf", "--m", "1", "--digits", "60"}. The ITERLAB_DIGITS environment
/// variable, when set, replaces the per-subcommand default precision.
CommandResult run(const std::vector<std::string>& args);

/// Parses "1.8", "9/5", "-0.5E-3", "sqrt3" or "sqrt(3)". Throws ParseError.
Real parse_number(const std::string& text, int digits);

}  // namespace iterlab::cli
