#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "nisim/errors.hpp"
#include "nisim/su2.hpp"

using namespace nisim;
using std::numbers::pi;

namespace {

const Amplitude I1{0.0, 1.0};

double max_diff(const Operator2& a, const std::array<Amplitude, 4>& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < 4; ++k) d = std::max(d, std::abs(a.entries()[k] - b[k]));
    return d;
}

// Direct 2x2 product, independent of Operator2::operator*.
std::array<Amplitude, 4> mul(const std::array<Amplitude, 4>& a, const std::array<Amplitude, 4>& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

std::array<Amplitude, 4> rz_entries(double t) { return {std::polar(1.0, t / 2), 0.0, 0.0, std::polar(1.0, -t / 2)}; }
std::array<Amplitude, 4> rx_entries(double a) {
    return {std::cos(a / 2), I1 * std::sin(a / 2), I1 * std::sin(a / 2), std::cos(a / 2)};
}

}  // namespace

TEST_CASE("rot_z examples") {
    CHECK(max_diff(rot_z(0.0), {1.0, 0.0, 0.0, 1.0}) == 0.0);
    CHECK(max_diff(rot_z(2 * pi), {-1.0, 0.0, 0.0, -1.0}) < 1e-15);
    PathState s = rot_z(pi / 2).apply(PathState::path_I());
    CHECK(std::abs(s.amplitude_I() - std::polar(1.0, pi / 4)) < 1e-15);
    CHECK(std::abs(s.amplitude_II()) == 0.0);
    CHECK_THROWS_AS(rot_z(std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK_THROWS_AS(rot_z(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("rot_x examples") {
    CHECK(max_diff(rot_x(0.0), {1.0, 0.0, 0.0, 1.0}) == 0.0);
    CHECK(max_diff(rot_x(pi), {0.0, I1, I1, 0.0}) < 1e-15);
    PathState s = rot_x(pi / 2).apply(PathState::path_I());
    CHECK(std::norm(s.amplitude_II()) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(rot_x(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("rot_xy examples") {
    for (double a : {0.0, 0.3, pi / 2, 2.0, pi}) CHECK(max_diff(rot_xy(0.0, a), rot_x(a).entries()) < 1e-15);
    CHECK(max_diff(rot_xy(pi / 2, pi), {0.0, 1.0, -1.0, 0.0}) < 1e-15);  // i sigma_y
    for (double phr : {0.0, 1.0, -2.5, 4.0}) CHECK(max_diff(rot_xy(phr, 0.0), {1.0, 0.0, 0.0, 1.0}) < 1e-15);
    CHECK_THROWS_AS(rot_xy(std::nan(""), 1.0), DomainError);
}

TEST_CASE("blade_operator examples") {
    const double beta_any = 0.77;
    CHECK(equal_up_to_global_phase(blade_operator({pi, beta_any}), rot_x(pi), 1e-12));
    Operator2 bal = blade_operator(BladeParams::balanced());
    for (const auto& e : bal.entries()) CHECK(std::abs(e) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    Operator2 u = blade_operator({pi / 2, 0.3});
    CHECK(std::arg(u(0, 0)) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(std::abs(u(0, 0)) == doctest::Approx(std::cos(pi / 4)).epsilon(1e-14));
    // oracle: explicit product of the three rotation matrices
    CHECK(max_diff(u, mul(rz_entries(0.3), mul(rx_entries(pi / 2), rz_entries(0.3)))) < 1e-15);
    CHECK_THROWS_AS(blade_operator({-0.1, 0.0}), DomainError);
    CHECK_THROWS_AS(blade_operator({pi + 1e-9, 0.0}), DomainError);
    CHECK_THROWS_AS(blade_operator({1.0, std::nan("")}), DomainError);
}

TEST_CASE("blade params") {
    BladeParams p{1.1, 0.0};
    CHECK(p.transmission() == doctest::Approx(std::cos(0.55)));
    CHECK(p.reflection() == doctest::Approx(std::sin(0.55)));
    CHECK(p.transmission() * p.transmission() + p.reflection() * p.reflection() ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("compose examples") {
    Operator2 u = blade_operator({1.0, 0.2});
    CHECK(compose({u}) == u);
    CHECK(equal_up_to_global_phase(compose({rot_x(pi), rot_x(pi)}), Operator2(), 1e-14));
    CHECK(max_diff(compose({rot_z(0.4), rot_z(1.3)}), rot_z(1.7).entries()) < 1e-15);
    // first element acts first: compose({A, B}) = B A
    Operator2 a = rot_x(0.9), b = rot_z(0.5);
    CHECK(max_diff(compose({a, b}), mul(b.entries(), a.entries())) < 1e-15);
    std::vector<Operator2> empty;
    CHECK_THROWS_AS(compose(std::span<const Operator2>(empty)), UsageError);
}

TEST_CASE("equal_up_to_global_phase examples") {
    Operator2 u = blade_operator({0.8, 1.9});
    CHECK(equal_up_to_global_phase(u, u.scaled(-1.0), 1e-12));
    CHECK(equal_up_to_global_phase(rot_z(pi), rot_z(pi).scaled(std::polar(1.0, 0.7)), 1e-12));
    CHECK_FALSE(equal_up_to_global_phase(rot_x(pi / 2), rot_z(pi / 2), 1e-9));
    CHECK_THROWS_AS(equal_up_to_global_phase(u, u, 0.0), DomainError);
}

TEST_CASE("from_entries rejects non-unitary matrices") {
    CHECK_THROWS_AS(Operator2::from_entries({1.0, 0.0, 0.0, 2.0}), ValidationError);
    CHECK_NOTHROW(Operator2::from_entries(rx_entries(0.4)));
}

TEST_CASE("path state normalization") {
    PathState s({3.0, 0.0}, {0.0, 4.0});
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(s.amplitude_I() - Amplitude(0.6)) < 1e-15);
    CHECK_THROWS_AS(PathState(0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(PathState(std::nan(""), 1.0), DomainError);
}

TEST_CASE("property: blade operators are unitary") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> alpha(0.0, pi), beta(-10.0, 10.0);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) worst = std::max(worst, blade_operator({alpha(rng), beta(rng)}).unitarity_defect());
    CHECK(worst < 1e-12);
}

TEST_CASE("property: mirror identity for arbitrary beta") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> beta(-20.0, 20.0);
    for (int k = 0; k < 100; ++k) {
        double b = beta(rng);
        CHECK(equal_up_to_global_phase(blade_operator({pi, b}), rot_x(pi), 1e-12));
        CHECK(equal_up_to_global_phase(compose({rot_z(b), rot_x(pi), rot_z(b)}), rot_x(pi), 1e-12));
    }
}

TEST_CASE("property: composed operators preserve the norm") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ang(-2 * pi, 2 * pi), alpha(0.0, pi), c(-1.0, 1.0);
    std::uniform_int_distribution<int> len(1, 12), pick(0, 3);
    double worst = 0.0;
    for (int k = 0; k < 2000; ++k) {
        std::vector<Operator2> seq;
        int n = len(rng);
        for (int j = 0; j < n; ++j) {
            switch (pick(rng)) {
                case 0: seq.push_back(rot_z(ang(rng))); break;
                case 1: seq.push_back(rot_x(ang(rng))); break;
                case 2: seq.push_back(rot_xy(ang(rng), ang(rng))); break;
                default: seq.push_back(blade_operator({alpha(rng), ang(rng)})); break;
            }
        }
        PathState psi({c(rng), c(rng)}, {c(rng), c(rng)});
        PathState out = compose(std::span<const Operator2>(seq)).apply(psi);
        worst = std::max(worst, std::abs(out.norm_squared() - 1.0));
    }
    CHECK(worst < 1e-12);
}
