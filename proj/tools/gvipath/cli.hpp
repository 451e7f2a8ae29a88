#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gvipath/error.hpp"

namespace gvipath::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitData = 3,
  kExitNoPath = 4,
  kExitResource = 5,
};

int exit_code_for(Errc code) noexcept;

/// Runs one `gvipath` invocation. `args` excludes the program name. Data goes
/// to `out`, diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gvipath::cli
