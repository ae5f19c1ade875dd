#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ecsim::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailed = 1;
inline constexpr int kDegenerate = 2;
inline constexpr int kAssertionFailed = 3;
inline constexpr int kUsage = 64;
inline constexpr int kParseError = 65;
inline constexpr int kMissingFile = 66;
inline constexpr int kIoError = 74;

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ecsim::cli
