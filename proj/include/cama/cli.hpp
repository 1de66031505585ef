#pragma once

#include <string>
#include <vector>

namespace cama::cli {

// Exit code contract: 0 success, 2 usage error, 3 data error,
// 4 metric/config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitMetricConfig = 4;

// Runs the CLI with the given arguments (excluding argv[0]). All output
// goes to stdout/stderr; returns the process exit code.
int run(const std::vector<std::string>& args);

}  // namespace cama::cli
