#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "nisim/errors.hpp"
#include "nisim/fit.hpp"
#include "nisim/materials.hpp"
#include "nisim/quadrature.hpp"
#include "nisim/special.hpp"

using namespace nisim;
using std::numbers::pi;

namespace {

// J0(x) = (1/2pi) \int_0^{2pi} cos(x sin t) dt; the trapezoid rule on a full
// period converges geometrically once the node count exceeds |x|.
double j0_trapezoid(double x) {
    const int n = 400;
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += std::cos(x * std::sin(2 * pi * k / n));
    return s / n;
}

// Power series sum (-x^2/4)^k / (k!)^2 in long double.
double j0_series(double x) {
    long double term = 1.0L, sum = 1.0L;
    const long double q = -static_cast<long double>(x) * x / 4.0L;
    for (int k = 1; k < 30; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        sum += term;
    }
    return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("bessel_j0 reference values") {
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK(bessel_j0(1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-15));
    CHECK(std::abs(bessel_j0(2.404825557695773)) < 1e-14);
    CHECK(std::abs(bessel_j0(5.520078110286311)) < 1e-14);
    CHECK(bessel_j0(-3.7) == bessel_j0(3.7));
    CHECK_THROWS_AS(bessel_j0(std::nan("")), DomainError);
}

TEST_CASE("bessel_j0 against series for small arguments") {
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = 4.0 * i / 400;
        worst = std::max(worst, std::abs(bessel_j0(x) - j0_series(x)));
    }
    CHECK(worst < 1e-14);
}

TEST_CASE("bessel_j0 against the integral representation") {
    double worst = 0.0;
    for (int i = 0; i <= 5000; ++i) {
        const double x = 60.0 * i / 5000;
        worst = std::max(worst, std::abs(bessel_j0(x) - j0_trapezoid(x)));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("bessel_j0 first zero by bisection") {
    double a = 2.0, b = 3.0;
    for (int k = 0; k < 200 && b - a > 1e-15; ++k) {
        const double m = 0.5 * (a + b);
        (bessel_j0(m) > 0 ? a : b) = m;
    }
    CHECK(std::abs(0.5 * (a + b) - 2.404825557695773) < 1e-10);
}

TEST_CASE("quadrature on known integrals") {
    auto r = integrate([](double x) { return std::complex<double>(x * x, 0.0); }, 0.0, 1.0);
    CHECK(r.value.real() == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(r.error_estimate <= 1e-9);

    r = integrate([](double x) { return std::polar(1.0, 3.0 * x); }, 0.0, 2 * pi);
    CHECK(std::abs(r.value) < 1e-12);

    r = integrate([](double x) { return std::polar(1.0, 2.0 * std::sin(x)); }, 0.0, 2 * pi,
                  {.abs_tol = 1e-12});
    CHECK(std::abs(r.value / (2 * pi) - bessel_j0(2.0)) < 1e-12);

    const double bp[] = {-1.0, 0.0, 1.0};
    r = integrate([](double x) { return std::complex<double>(1.0 / (pi * (1.0 + x * x)), 0.0); }, -1e5, 1e5,
                  {.abs_tol = 1e-12}, bp);
    CHECK(r.value.real() == doctest::Approx(2.0 * std::atan(1e5) / pi).epsilon(1e-11));

    CHECK(integrate_real([](double x) { return std::exp(x); }, 0.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    // reversed limits
    CHECK(integrate_real([](double x) { return x; }, 1.0, 0.0) == doctest::Approx(-0.5));
}

TEST_CASE("quadrature failures") {
    CHECK_THROWS_AS(integrate([](double) { return std::complex<double>(1.0); }, 0.0, INFINITY), DomainError);
    CHECK_THROWS_AS(integrate([](double x) { return std::complex<double>(1.0 / x); }, 0.0, 1.0), NumericalError);
    QuadratureOptions tight{.abs_tol = 1e-14, .rel_tol = 0.0, .max_subdivisions = 3};
    try {
        integrate([](double x) { return std::polar(1.0, 500.0 * x * x); }, 0.0, 10.0, tight);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.subdivisions() >= 3);
        CHECK(e.error_estimate() > 1e-14);
    }
}

TEST_CASE("fringe fit recovers coefficients") {
    std::vector<double> x, y;
    for (int i = 0; i < 360; ++i) {
        x.push_back(2 * pi * i / 360);
        y.push_back(0.5 + 0.2 * std::sin(x.back()) - 0.1 * std::cos(x.back()));
    }
    FringeFit f = fit_fringe(x, y, 1);
    CHECK(f.offset == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(f.sin_coef == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(f.cos_coef == doctest::Approx(-0.1).epsilon(1e-13));
    CHECK(f.amplitude == doctest::Approx(std::hypot(0.2, 0.1)).epsilon(1e-13));
    CHECK(f.phase == doctest::Approx(std::atan2(-0.1, 0.2)).epsilon(1e-13));
    CHECK(f.rms_residual < 1e-14);

    // second harmonic plus noise, non-uniform sampling
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 2 * pi);
    std::normal_distribution<double> noise(0.0, 1e-3);
    x.clear();
    y.clear();
    for (int i = 0; i < 4000; ++i) {
        x.push_back(u(rng));
        y.push_back(1.0 + 0.3 * std::cos(2 * x.back()) + noise(rng));
    }
    f = fit_fringe(x, y, 2);
    CHECK(f.cos_coef == doctest::Approx(0.3).epsilon(1e-3));
    CHECK(std::abs(f.sin_coef) < 1e-4);
    CHECK(f.rms_residual == doctest::Approx(1e-3).epsilon(0.05));
}

TEST_CASE("fringe fit input checks") {
    std::vector<double> x(63, 0.0), y(63, 0.0);
    for (int i = 0; i < 63; ++i) x[i] = i;
    CHECK_THROWS_AS(fit_fringe(x, y, 1), ValidationError);
    std::vector<double> x2(100, 0.0), y2(99, 0.0);
    CHECK_THROWS_AS(fit_fringe(x2, y2, 1), ValidationError);
    std::vector<double> same(100, 1.0), vals(100, 0.0);
    CHECK_THROWS_AS(fit_fringe(same, vals, 1), NumericalError);
}

TEST_CASE("reflection table from the silicon lattice") {
    const double a = 5.431020511e-10, b = 4.1491e-15;
    const auto& r111 = find_reflection("si111");
    const auto& r220 = find_reflection("SI220");
    CHECK(r111.d_spacing == doctest::Approx(a / std::sqrt(3.0)).epsilon(1e-5));
    CHECK(r220.d_spacing == doctest::Approx(a / std::sqrt(8.0)).epsilon(1e-5));
    CHECK(r111.cell_volume == doctest::Approx(a * a * a).epsilon(1e-6));
    CHECK(r111.structure_factor == doctest::Approx(4 * std::sqrt(2.0) * b).epsilon(1e-5));
    CHECK(r220.structure_factor == doctest::Approx(8 * b).epsilon(1e-5));
    CHECK(reflections().size() == 2);
    CHECK_THROWS_AS(find_reflection("Ge111"), ValidationError);
}

TEST_CASE("bragg angle and pendellosung length") {
    CHECK(bragg_angle(4.4e-10, 3.1356e-10) == doctest::Approx(std::asin(4.4 / 6.2712)).epsilon(1e-15));
    CHECK_THROWS_AS(bragg_angle(4.4e-10, 1.92016e-10), ValidationError);
    CHECK_THROWS_AS(bragg_angle(-1.0, 3e-10), ValidationError);
    const auto& r = find_reflection("Si111");
    const double lambda = 2.71e-10;
    const double expect = pi * r.cell_volume * std::cos(std::asin(lambda / (2 * r.d_spacing))) /
                          (lambda * r.structure_factor);
    CHECK(pendellosung_length(r, lambda) == doctest::Approx(expect).epsilon(1e-14));
    // tens of micrometres for thermal neutrons on Si(111)
    CHECK(pendellosung_length(r, lambda) > 2e-5);
    CHECK(pendellosung_length(r, lambda) < 1e-4);
}
