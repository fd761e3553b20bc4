#include "nisim/fit.hpp"

#include <array>
#include <cmath>

#include "nisim/errors.hpp"

namespace nisim {

FringeFit fit_fringe(std::span<const double> x, std::span<const double> y, int harmonic) {
    if (x.size() != y.size()) throw ValidationError("fringe fit: x and y differ in length");
    if (x.size() < 64) throw ValidationError("fringe fit needs at least 64 points");
    const double k = harmonic;

    // Normal equations for the basis (1, sin kx, cos kx).
    std::array<std::array<double, 4>, 3> m{};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::array<double, 3> f = {1.0, std::sin(k * x[i]), std::cos(k * x[i])};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] += f[r] * f[c];
            m[r][3] += f[r] * y[i];
        }
    }
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        }
        if (std::abs(m[pivot][col]) < 1e-12 * static_cast<double>(x.size())) {
            throw NumericalError("fringe fit: singular design (points do not resolve the harmonic)", 0, 0.0);
        }
        std::swap(m[col], m[pivot]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    FringeFit fit{};
    fit.offset = m[0][3] / m[0][0];
    fit.sin_coef = m[1][3] / m[1][1];
    fit.cos_coef = m[2][3] / m[2][2];
    fit.amplitude = std::hypot(fit.sin_coef, fit.cos_coef);
    fit.phase = std::atan2(fit.cos_coef, fit.sin_coef);
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double model = fit.offset + fit.sin_coef * std::sin(k * x[i]) + fit.cos_coef * std::cos(k * x[i]);
        ss += (y[i] - model) * (y[i] - model);
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(x.size()));
    return fit;
}

}  // namespace nisim
