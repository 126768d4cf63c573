#pragma once

#include <iosfwd>

namespace vcsched {

enum ExitCode : int {
  kExitOk = 0,
  kExitInfeasible = 1,
  kExitInputError = 2,
  kExitInternalError = 3,
};

/// Entry point of the `vcsched` tool. Machine output goes to `out` (or to
/// files named by --out), human-readable messages to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vcsched
