#include <cmath>
#include <numbers>
#include <vector>

#include "nisim/errors.hpp"
#include "nisim/special.hpp"

namespace nisim {

namespace {

double j0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

// Miller's backward recurrence normalized by J0 + 2 sum J_2k = 1.
double j0_miller(double x) {
    int n = static_cast<int>(x) + 30 + static_cast<int>(10.0 * std::cbrt(x));
    if (n % 2) ++n;
    double above = 0.0;
    double current = 1e-30;
    double norm = 0.0;
    double j0 = 0.0;
    for (int k = n; k >= 1; --k) {
        const double below = 2.0 * k / x * current - above;
        above = current;
        current = below;  // J_{k-1}
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * current;
        if (std::abs(current) > 1e250) {
            above *= 1e-250;
            current *= 1e-250;
            norm *= 1e-250;
        }
    }
    j0 = current;
    norm += j0;
    return j0 / norm;
}

double j0_hankel(double x) {
    // P, Q asymptotic series; |a_k| = prod_{j=1..k} (2j-1)^2 / (k! 8^k), and
    // a_k carries (-1)^k for order zero.
    double p = 0.0;
    double q = 0.0;
    double a = 1.0;
    double xpow = 1.0;
    for (int k = 0; k < 40; ++k) {
        const double term = a / xpow;
        const int m = k % 4;
        if (m == 0) p += term;
        if (m == 1) q -= term;
        if (m == 2) p -= term;
        if (m == 3) q += term;
        if (std::abs(term) < 1e-17) break;
        a *= static_cast<double>((2 * k + 1) * (2 * k + 1)) / (8.0 * (k + 1));
        xpow *= x;
    }
    const double w = x - 0.25 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(w) - q * std::sin(w));
}

}  // namespace

double bessel_j0(double x) {
    if (!std::isfinite(x)) {
        throw DomainError("bessel_j0: argument must be finite");
    }
    x = std::abs(x);
    if (x < 8.0) return j0_series(x);
    if (x <= 50.0) return j0_miller(x);
    return j0_hankel(x);
}

}  // namespace nisim
