#pragma once

#include <span>
#include <string_view>

namespace nisim {

/// Crystal reflection data used for Bragg angles and Pendellosung lengths.
struct Reflection {
    std::string_view name;
    double d_spacing;         ///< lattice plane spacing [m]
    double cell_volume;       ///< unit-cell volume [m^3]
    double structure_factor;  ///< |F_H| in scattering-length units [m]
};

std::span<const Reflection> reflections();

/// Case-insensitive lookup ("Si111", "si220"). Throws ValidationError.
const Reflection& find_reflection(std::string_view name);

/// arcsin(lambda / 2d); throws ValidationError when lambda >= 2d.
double bragg_angle(double wavelength, double d_spacing);

/// Symmetric-Laue Pendellosung length pi V cos(theta_B) / (lambda |F_H|).
double pendellosung_length(const Reflection& refl, double wavelength);

}  // namespace nisim
