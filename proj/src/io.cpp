#include "nisim/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

#include "nisim/errors.hpp"

namespace nisim {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        cells.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return cells;
}

bool to_double(std::string_view s, double& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool skippable(std::string_view line) {
    const std::string_view t = trim(line);
    return t.empty() || t.front() == '#';
}

}  // namespace

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) throw UsageError("row width does not match the column count");
    rows.push_back(std::move(row));
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(std::ostream& out, const Table& table) {
    for (const auto& [k, v] : table.metadata) out << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& table) {
    nlohmann::ordered_json j;
    j["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.metadata) j["metadata"][k] = v;
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    out << j.dump(1) << '\n';
}

Table read_csv(std::istream& in) {
    Table t;
    std::string line;
    std::size_t row = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (skippable(line)) continue;
        const auto cells = split(line);
        if (!header) {
            for (auto c : cells) t.columns.emplace_back(c);
            header = true;
            continue;
        }
        ++row;
        if (cells.size() != t.columns.size()) {
            throw IngestionError(row, "expected " + std::to_string(t.columns.size()) + " cells, got " +
                                          std::to_string(cells.size()));
        }
        std::vector<double> values(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (!to_double(cells[i], values[i])) {
                throw IngestionError(row, "non-numeric cell '" + std::string(cells[i]) + "'");
            }
        }
        t.rows.push_back(std::move(values));
    }
    if (!header) throw IngestionError(0, "missing header row");
    return t;
}

MeasuredSeries read_measured(std::istream& in) {
    const Table t = read_csv(in);
    const bool with_err = t.columns == std::vector<std::string>{"x", "y", "y_err"};
    if (!with_err && t.columns != std::vector<std::string>{"x", "y"}) {
        throw IngestionError(0, "header must be 'x,y' or 'x,y,y_err'");
    }
    MeasuredSeries s;
    if (with_err) s.y_err.emplace();
    for (const auto& r : t.rows) {
        s.x.push_back(r[0]);
        s.y.push_back(r[1]);
        if (with_err) s.y_err->push_back(r[2]);
    }
    if (s.x.empty()) throw IngestionError(0, "no data rows");
    return s;
}

MeasuredSeries read_measured(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open measured data '" + path + "'");
    return read_measured(in);
}

ComparisonReport compare(const MeasuredSeries& measured, const std::vector<double>& sim_x,
                         const std::vector<double>& sim_y) {
    if (sim_x.size() != sim_y.size() || sim_x.empty()) {
        throw ComparisonError("simulated curve needs matching, non-empty x and y");
    }
    for (std::size_t i = 1; i < sim_x.size(); ++i) {
        if (!(sim_x[i] > sim_x[i - 1])) throw ComparisonError("simulated x must be strictly increasing");
    }
    ComparisonReport rep;
    double ss = 0.0;
    for (std::size_t k = 0; k < measured.x.size(); ++k) {
        const double x = measured.x[k];
        if (x < sim_x.front() || x > sim_x.back()) continue;
        const auto hi = std::lower_bound(sim_x.begin(), sim_x.end(), x);
        const std::size_t j = static_cast<std::size_t>(hi - sim_x.begin());
        double sim = sim_y[j];
        if (sim_x[j] != x) {
            const double w = (x - sim_x[j - 1]) / (sim_x[j] - sim_x[j - 1]);
            sim = sim_y[j - 1] + w * (sim_y[j] - sim_y[j - 1]);
        }
        const double res = measured.y[k] - sim;
        rep.x.push_back(x);
        rep.measured.push_back(measured.y[k]);
        rep.simulated.push_back(sim);
        rep.residual.push_back(res);
        ss += res * res;
        rep.max_abs = std::max(rep.max_abs, std::abs(res));
    }
    if (rep.x.empty()) throw ComparisonError("measured and simulated x-ranges do not overlap");
    rep.rms = std::sqrt(ss / static_cast<double>(rep.x.size()));
    return rep;
}

}  // namespace nisim
