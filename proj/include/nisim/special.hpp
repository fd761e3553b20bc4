#pragma once

namespace nisim {

/// Bessel function of the first kind, order zero. Power series below 8,
/// Miller backward recurrence up to 50, Hankel asymptotics beyond.
/// Absolute accuracy ~1e-14 on |x| <= 50.
double bessel_j0(double x);

}  // namespace nisim
