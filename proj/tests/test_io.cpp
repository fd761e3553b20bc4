#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "nisim/errors.hpp"
#include "nisim/io.hpp"

using namespace nisim;

namespace {

Table sample_table() {
    Table t;
    t.metadata = {{"generator", "nisim"}, {"seed", "1"}};
    t.columns = {"x", "y"};
    t.add_row({0.1, 1.0 / 3.0});
    t.add_row({2.0, -0.0});
    return t;
}

MeasuredSeries parse(const std::string& text) {
    std::istringstream in(text);
    return read_measured(in);
}

}  // namespace

TEST_CASE("format_double is lossless") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("csv layout") {
    std::ostringstream out;
    write_csv(out, sample_table());
    CHECK(out.str() ==
          "# generator: nisim\n# seed: 1\nx,y\n0.10000000000000001,0.33333333333333331\n2,-0\n");
    CHECK(out.str().find('\r') == std::string::npos);

    Table bad = sample_table();
    CHECK_THROWS_AS(bad.add_row({1.0}), UsageError);
}

TEST_CASE("csv round trip") {
    std::ostringstream out;
    write_csv(out, sample_table());
    std::istringstream in(out.str());
    const Table back = read_csv(in);
    CHECK(back.columns == sample_table().columns);
    CHECK(back.rows == sample_table().rows);
}

TEST_CASE("json layout") {
    std::ostringstream out;
    write_json(out, sample_table());
    const auto j = nlohmann::json::parse(out.str());
    CHECK(j["metadata"]["generator"] == "nisim");
    CHECK(j["columns"][1] == "y");
    CHECK(j["rows"][0][1].get<double>() == 1.0 / 3.0);
    CHECK(j["rows"].size() == 2);
}

TEST_CASE("read_measured examples") {
    MeasuredSeries s = parse("x,y\n0,0.5\n1,0.6\n2,0.7\n");
    CHECK(s.x.size() == 3);
    CHECK(s.y[2] == 0.7);
    CHECK_FALSE(s.y_err.has_value());

    s = parse("# run 17\n# detector O\nx,y,y_err\n-10,0.8,0.01\n10,0.82,0.02\n");
    CHECK(s.x.size() == 2);
    REQUIRE(s.y_err.has_value());
    CHECK((*s.y_err)[1] == 0.02);

    try {
        parse("x,y\n0,0.4\n0.5,abc\n");
        FAIL("expected IngestionError");
    } catch (const IngestionError& e) {
        CHECK(e.row() == 2);
    }
    try {
        parse("x,y\n0,0.4\n1,0.5\n2\n");
        FAIL("expected IngestionError");
    } catch (const IngestionError& e) {
        CHECK(e.row() == 3);
    }
    CHECK_THROWS_AS(parse("a,b\n0,1\n"), ValidationError);
    CHECK_THROWS_AS(parse("x,y\n0,nan\n"), IngestionError);
    CHECK_THROWS_AS(read_measured(std::string("/nonexistent/data.csv")), ValidationError);
}

TEST_CASE("compare examples") {
    std::vector<double> sx, sy;
    for (int i = 0; i <= 100; ++i) {
        sx.push_back(i * 0.1);
        sy.push_back(std::sin(sx.back()));
    }
    MeasuredSeries same{sx, sy, std::nullopt};
    ComparisonReport r = compare(same, sx, sy);
    CHECK(r.rms == 0.0);
    CHECK(r.max_abs == 0.0);

    MeasuredSeries shifted = same;
    for (double& y : shifted.y) y += 0.1;
    r = compare(shifted, sx, sy);
    CHECK(r.rms == doctest::Approx(0.1).epsilon(1e-12));

    std::mt19937_64 rng(72);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::uniform_real_distribution<double> ux(0.0, 10.0);
    MeasuredSeries noisy;
    for (int i = 0; i < 20000; ++i) {
        noisy.x.push_back(ux(rng));
        noisy.y.push_back(std::sin(noisy.x.back()) + noise(rng));
    }
    std::vector<double> fx, fy;
    for (int i = 0; i <= 10000; ++i) {
        fx.push_back(i * 1e-3);
        fy.push_back(std::sin(fx.back()));
    }
    r = compare(noisy, fx, fy);
    CHECK(r.rms == doctest::Approx(0.01).epsilon(0.03));
    CHECK(r.x.size() == noisy.x.size());

    // linear interpolation between nodes
    MeasuredSeries mid{{0.05}, {0.0}, std::nullopt};
    r = compare(mid, {0.0, 0.1}, {0.0, 1.0});
    CHECK(r.simulated[0] == doctest::Approx(0.5));
    CHECK(r.residual[0] == doctest::Approx(-0.5));

    MeasuredSeries outside{{20.0, 30.0}, {0.0, 0.0}, std::nullopt};
    CHECK_THROWS_AS(compare(outside, sx, sy), ComparisonError);
    CHECK_THROWS_AS(compare(same, {1.0, 0.5}, {0.0, 0.0}), ValidationError);
}
