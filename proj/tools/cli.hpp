#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace recsim::cli {

/// Exit codes of the recsim tool.
enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Environment variable holding the default output directory.
inline constexpr const char* kOutputDirEnv = "RECSIM_OUTPUT_DIR";

/// Entry point. `args` excludes the program name. Data goes to `out`,
/// progress and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace recsim::cli
