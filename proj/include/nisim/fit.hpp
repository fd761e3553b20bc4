#pragma once

#include <span>

namespace nisim {

/// y ~ offset + a sin(k x) + b cos(k x), i.e. offset + amplitude sin(k x + phase).
struct FringeFit {
    double offset;
    double sin_coef;   ///< a
    double cos_coef;   ///< b
    double amplitude;  ///< sqrt(a^2 + b^2)
    double phase;      ///< atan2(b, a)
    double rms_residual;
};

/// Linear least squares on at least 64 points. Throws ValidationError for
/// short or mismatched inputs and NumericalError for a singular design.
FringeFit fit_fringe(std::span<const double> x, std::span<const double> y, int harmonic);

}  // namespace nisim
