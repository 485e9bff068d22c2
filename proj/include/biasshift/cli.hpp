#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace biasshift::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Stable exit codes for scripting.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInput = 2,
  kExitMismatch = 3,
};

// Runs the `biasshift` command line. `args` excludes the program name.
// Reports go to --out (or `out` when omitted); diagnostics and the
// human-readable summary go to `err`, or to `out` when a report file is
// written.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace biasshift::cli
