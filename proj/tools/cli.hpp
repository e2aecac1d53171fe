#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace boxcells::cli {

/// Exit codes: 0 success, 2 bad input or violated precondition, 64 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitUsage = 64;

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace boxcells::cli
