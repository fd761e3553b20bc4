#include "nisim/materials.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "nisim/errors.hpp"

namespace nisim {

namespace {

// Silicon, a = 5.431020511 A; coherent scattering length b = 4.1491 fm.
// Diamond-structure factors: |F_111| = 4 sqrt(2) b, |F_220| = 8 b.
constexpr double kSiCellVolume = 1.601934e-28;
constexpr std::array<Reflection, 2> kTable = {{
    {"Si111", 3.13560e-10, kSiCellVolume, 2.34710e-14},
    {"Si220", 1.92016e-10, kSiCellVolume, 3.31928e-14},
}};

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace

std::span<const Reflection> reflections() { return kTable; }

const Reflection& find_reflection(std::string_view name) {
    for (const auto& r : kTable) {
        if (iequals(r.name, name)) return r;
    }
    throw ValidationError("unknown reflection '" + std::string(name) + "' (known: Si111, Si220)");
}

double bragg_angle(double wavelength, double d_spacing) {
    if (!(wavelength > 0.0) || !(d_spacing > 0.0)) {
        throw ValidationError("wavelength and d-spacing must be positive");
    }
    const double s = wavelength / (2.0 * d_spacing);
    if (s >= 1.0) {
        throw ValidationError("Bragg condition unsatisfiable: lambda/2d = " + std::to_string(s) + " > 1");
    }
    return std::asin(s);
}

double pendellosung_length(const Reflection& refl, double wavelength) {
    const double theta = bragg_angle(wavelength, refl.d_spacing);
    return std::numbers::pi * refl.cell_volume * std::cos(theta) / (wavelength * refl.structure_factor);
}

}  // namespace nisim
