#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nisim/analysis.hpp"
#include "nisim/dyndiff.hpp"
#include "nisim/vibration.hpp"

namespace nisim {

enum class OmegaUnit { RadPerSecond, Hertz };
enum class OutputFormat { Csv, Json };

/// Fully resolved run configuration in SI units.
struct RunConfig {
    // interferometer
    double wavelength = 4.4e-10;
    std::string reflection = "Si111";
    std::optional<double> d_spacing;  ///< overrides the reflection's d
    double L = 0.05;
    double y0 = 1e-7;
    double theta0 = 1e-7;

    // dynamical diffraction
    double dd_wavelength = 2.71e-10;
    std::string dd_reflection = "Si111";
    double thickness = 1e-3;
    std::optional<double> pendellosung;  ///< overrides the table value
    std::optional<double> dd_y_scale;    ///< per radian; default Delta_H / d
    double sigma = 4.26e-6;
    bool width_is_fwhm = false;

    // numerics and output
    double quad_tol = 1e-9;
    std::size_t mc_samples = 100000;
    std::uint64_t seed = 1;
    OmegaUnit omega_unit = OmegaUnit::RadPerSecond;
    CoherenceMethod method = CoherenceMethod::Quadrature;
    PhaseModel phase_model = PhaseModel::LowFrequency;
    OutputFormat format = OutputFormat::Csv;
    std::string output;  ///< empty writes to stdout

    bool operator==(const RunConfig&) const = default;

    PhysicalParams physical() const;
    DDProfile dd_profile() const;
    MomentumDistribution momentum(double center = 0.0) const;
    NoiseModel noise(NoiseAxis axis) const;
    CoherenceOptions coherence_options(Exec exec = Exec::Parallel) const;
    /// Factor converting user omega values to rad/s.
    double omega_scale() const;
};

/// Parses flat `key = value  # comment` lines. Dimensional values take a unit
/// suffix (m, cm, mm, um, nm, angstrom; rad, mrad, urad, arcsec, deg); a bare
/// number is read in SI units. Throws ParseError naming the line.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

/// Applies one `key = value` setting with the same rules as parse_config.
/// Leaves `config` unchanged when it throws.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Single values with the config unit rules, e.g. "1mm", "4.26 urad".
double parse_length(std::string_view text);
double parse_angle(std::string_view text);

/// Canonical document that parses back to the same config.
std::string emit(const RunConfig& config);

/// key/value pairs for output metadata, in emit order.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

/// Name of the environment variable holding a default config path.
inline constexpr const char* kConfigEnvVar = "NISIM_CONFIG";

}  // namespace nisim
