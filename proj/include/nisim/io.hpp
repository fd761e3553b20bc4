#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nisim {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Column-oriented numeric output with an ordered metadata block.
struct Table {
    Metadata metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
};

/// %.17g
std::string format_double(double x);

/// `# key: value` header lines, a column header, then rows; LF endings.
void write_csv(std::ostream& out, const Table& table);
/// {"metadata": {...}, "columns": [...], "rows": [[...], ...]}
void write_json(std::ostream& out, const Table& table);

/// Generic numeric CSV with a header row; '#' lines are skipped.
Table read_csv(std::istream& in);

struct MeasuredSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::optional<std::vector<double>> y_err;
};

/// Header `x,y` or `x,y,y_err`; errors name the 1-based data row.
MeasuredSeries read_measured(std::istream& in);
MeasuredSeries read_measured(const std::string& path);

struct ComparisonReport {
    std::vector<double> x;
    std::vector<double> measured;
    std::vector<double> simulated;  ///< linearly interpolated onto x
    std::vector<double> residual;   ///< measured - simulated
    double rms = 0.0;
    double max_abs = 0.0;
};

/// Uses measured points inside the simulated x-range; throws ComparisonError
/// when none overlap. sim_x must be strictly increasing.
ComparisonReport compare(const MeasuredSeries& measured, const std::vector<double>& sim_x,
                         const std::vector<double>& sim_y);

}  // namespace nisim
