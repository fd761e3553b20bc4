#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nisim/exec.hpp"
#include "nisim/materials.hpp"
#include "nisim/quadrature.hpp"
#include "nisim/su2.hpp"

namespace nisim {

/// Measured or externally computed beta(delta_theta), stored in radians.
struct BetaTable {
    std::vector<double> delta_theta;  ///< strictly increasing [rad]
    std::vector<double> beta;         ///< [rad]

    void validate() const;
    /// Linear interpolation; throws RangeError outside the grid.
    double lookup(double delta_theta) const;
};

/// Two columns: delta_theta in urad, beta in rad. '#' starts a comment.
BetaTable read_beta_table(std::istream& in);
BetaTable read_beta_table(const std::string& path);

/// Symmetric-Laue blade. In analytic mode
///   t(y) = e^{iAy} [cos X - i y/sqrt(1+y^2) sin X],  X = A sqrt(1+y^2),
/// with A = pi D / Delta_H and y = y_per_radian * delta_theta. A and the
/// y-scaling are independent so other conventions can be matched.
struct DDProfile {
    double thickness = 0.0;     ///< D [m]
    double pendellosung = 0.0;  ///< Delta_H [m]
    double bragg_angle = 0.0;   ///< [rad]
    double y_per_radian = 0.0;  ///< dimensionless deviation per radian
    std::shared_ptr<const BetaTable> table;  ///< set in tabulated mode

    bool tabulated() const { return table != nullptr; }
    void validate() const;
    double pendellosung_phase() const;  ///< A
    double y(double delta_theta) const;

    static DDProfile analytic(double thickness, double pendellosung, double bragg_angle, double y_per_radian);
    /// Delta_H from the reflection table; y = delta_theta Delta_H / d, so that
    /// |y| <= 1 spans the total-reflection width 2d / Delta_H.
    static DDProfile for_reflection(const Reflection& refl, double wavelength, double thickness);
    static DDProfile from_table(BetaTable table);
};

struct LaueAmplitudes {
    Amplitude t;
    Amplitude r;
};

/// Analytic mode only; tabulated profiles raise UnsupportedOperation.
LaueAmplitudes laue_amplitudes(double delta_theta, const DDProfile& profile);

/// arg t, continuous in delta_theta with beta -> 0 for delta_theta -> +inf.
/// t(-y) = conj t(y), so beta is odd about (0, beta(0)).
double dynamical_beta(double delta_theta, const DDProfile& profile);

/// Lorentzian g = (sigma/pi) / (sigma^2 + (delta_theta - center)^2).
struct MomentumDistribution {
    double sigma = 0.0;
    double center = 0.0;

    void validate() const;
    /// The width is sigma unless width_is_fwhm, in which case sigma = width / 2.
    static MomentumDistribution from_width(double width, bool width_is_fwhm, double center = 0.0);
};

double lorentzian_density(double delta_theta, const MomentumDistribution& dist);

/// One point mass of a discrete beta distribution.
struct PhaseSample {
    double beta;
    double weight;
};

/// gamma = sum p_k e^{2i beta_k}. Weights must be >= 0 and sum to 1 within 1e-6.
Amplitude coherence_dd(std::span<const PhaseSample> samples);

/// gamma = int p(beta) e^{2i beta} d beta over [lo, hi]; the density must
/// integrate to 1 within 1e-6.
Amplitude coherence_dd(const std::function<double(double)>& density, double lo, double hi,
                       const QuadratureOptions& opts = {});

/// e^{i beta} for one extra crystal, e^{2i beta} for the four-blade interferometer.
enum class PhaseWeight { Single, Double };

/// Half-width of the averaging window in units of sigma.
inline constexpr double kTruncationSigmas = 1e5;

struct DDAverage {
    double A_O = 0.0;  ///< int g over the window
    Amplitude B_O;     ///< int g e^{i w beta} over the window
    double contrast = 0.0;
    double phase = 0.0;
    double truncation_mass = 0.0;  ///< Lorentzian mass outside the window
    double error_estimate = 0.0;
    std::size_t subdivisions = 0;
};

/// Quadrature over delta_theta in center +- kTruncationSigmas sigma, clipped
/// to the table range for tabulated profiles.
DDAverage average_dd(const MomentumDistribution& dist, const DDProfile& profile, PhaseWeight weight,
                     const QuadratureOptions& opts = {});

struct DDInterferogram {
    DDAverage average;
    std::vector<double> phi;
    std::vector<double> intensity;  ///< (A_O - |B_O| cos(phi + arg B_O)) / 2
};

DDInterferogram averaged_interferogram_dd(std::span<const double> phi_grid, const MomentumDistribution& dist,
                                          const DDProfile& profile, PhaseWeight weight,
                                          const QuadratureOptions& opts = {});

struct MisalignmentPoint {
    double center;
    double contrast;
    double phase;
};

/// Single-beta contrast and arg B_O for each misalignment center.
std::vector<MisalignmentPoint> contrast_vs_misalignment(std::span<const double> centers, double sigma,
                                                        const DDProfile& profile, Exec exec = Exec::Parallel,
                                                        const QuadratureOptions& opts = {});

}  // namespace nisim
