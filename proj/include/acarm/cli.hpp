#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace acarm::cli {

enum ExitCode : int {
  kSuccess = 0,   // success, or a true verdict
  kRefuted = 1,   // a verified false verdict
  kUsage = 2,     // malformed input or invalid parameters
  kBudget = 3,    // a search or factoring budget ran out
  kInternal = 4,  // an internal invariant failed
};

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace acarm::cli
