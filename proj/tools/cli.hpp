#pragma once

#include <iosfwd>

namespace relcount::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kUnstableInventory = 3,
  kOracleFailure = 4,
};

// Entry point of the relcount tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace relcount::cli
