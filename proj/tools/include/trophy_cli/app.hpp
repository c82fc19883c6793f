#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trophy::cli {

inline constexpr int kExitSolved = 0;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitEvalFailure = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitManifest = 65;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trophy::cli
