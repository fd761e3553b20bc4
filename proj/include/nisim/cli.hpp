#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nisim::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one command line (without the program name). Returns 0 on success,
/// 1 for invalid input or a failed selftest, 2 for a numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses `a:step:b` (inclusive), a comma list, or a single number.
std::vector<double> parse_grid(const std::string& text);

}  // namespace nisim::cli
