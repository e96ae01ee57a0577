#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace discovery::cli {

inline constexpr const char* kVersion = "discovery 0.1.0";

/// Full CLI entry point (argv without the program name). Exit codes:
/// 0 success, 1 verification failure, 2 invalid input, 3 IO error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace discovery::cli
