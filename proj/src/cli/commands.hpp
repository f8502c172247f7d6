#pragma once

#include <ostream>

namespace jury::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitDomain = 3,
  kExitCapability = 4,
};

/// Entry point of the `jurysim` tool. Subcommands: accuracy, sweep,
/// partition, threshold. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jury::cli
