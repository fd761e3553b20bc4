#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace nisim {

struct QuadratureOptions {
    double abs_tol = 1e-9;
    double rel_tol = 0.0;
    std::size_t max_subdivisions = 50000;
};

struct QuadratureResult {
    std::complex<double> value;
    double error_estimate;
    std::size_t subdivisions;
    std::size_t evaluations;
};

using ComplexIntegrand = std::function<std::complex<double>(double)>;

/// Globally adaptive 21-point Gauss-Kronrod integration of a complex-valued
/// integrand over [a, b]. Optional interior breakpoints seed the interval
/// list. The interval with the largest error estimate is bisected until
/// error <= max(abs_tol, rel_tol * |I|). Throws NumericalError when the
/// subdivision budget runs out or the integrand is non-finite.
QuadratureResult integrate(const ComplexIntegrand& f, double a, double b,
                           const QuadratureOptions& opts = {},
                           std::span<const double> breakpoints = {});

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadratureOptions& opts = {});

}  // namespace nisim
