#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nisim::acceptance {

inline constexpr int kCriterionCount = 10;

struct Result {
    int id;
    std::string title;
    bool pass;
    std::string detail;
    double seconds;
};

std::string_view title(int id);

/// Runs one criterion at its stated tolerance. Throws UsageError for an
/// unknown id; numerical failures inside a check are reported as FAIL.
Result run(int id);

/// Runs the given ids in order, or all of them when `ids` is empty.
std::vector<Result> run_all(std::span<const int> ids = {});

/// One `[PASS]`/`[FAIL]` line per result.
void print(std::ostream& out, const std::vector<Result>& results);

}  // namespace nisim::acceptance
