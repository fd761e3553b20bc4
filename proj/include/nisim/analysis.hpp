#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nisim/exec.hpp"
#include "nisim/geometry.hpp"
#include "nisim/vibration.hpp"

namespace nisim {

/// Noise axis with its amplitude (y0 [m] or theta0 [rad]).
struct NoiseModel {
    NoiseAxis axis = NoiseAxis::Y;
    double amplitude = 1e-7;

    /// y0 = 0.1 um or theta0 = 0.1 urad.
    static NoiseModel defaults(NoiseAxis axis);
};

struct CoherenceOptions {
    CoherenceMethod method = CoherenceMethod::Quadrature;
    PhaseModel model = PhaseModel::LowFrequency;
    double tol = 1e-9;
    std::size_t mc_samples = 100000;
    std::uint64_t seed = 1;
    Exec exec = Exec::Parallel;
};

/// gamma (and gamma' for the five-blade geometry) by the selected method.
/// ClosedForm always uses the low-frequency Bessel result.
BranchCoherence coherence(GeometryKind kind, const NoiseModel& noise, double omega, const PhysicalParams& params,
                          const CoherenceOptions& opts = {});

struct Interferogram {
    std::vector<double> phase_grid;
    std::vector<double> intensity;
    ExitPort port = ExitPort::O;
    GeometryKind kind = GeometryKind::ThreeBlade;
    double omega = 0.0;
    double chi = 0.0;  ///< five-blade only
    Amplitude gamma{1.0};
    std::optional<Amplitude> gamma_prime;
};

/// (I_max - I_min) / (I_max + I_min). Throws ValidationError for an empty or
/// all-zero curve.
double contrast(const Interferogram& curve);

/// Noise-averaged intensities for an |I> input:
///   three: I_O = (1 + |g| cos(phi + arg g)) / 2
///   four:  I_H = (1 + |g| cos(phi + arg g)) / 2
///   five:  I_H = (2 - |g| cos(chi - phi + arg g) + |g'| cos(chi + phi + arg g')) / 4
/// with the other port the complement.
Interferogram averaged_interferogram(GeometryKind kind, const NoiseModel& noise, double omega,
                                     const PhysicalParams& params, ExitPort port, std::span<const double> phase_grid,
                                     double chi = 1.5707963267948966, const CoherenceOptions& opts = {});

/// Five-blade H-port curve along chi = mu - phi.
struct RefocusedInterferogram {
    Interferogram curve;
    double mu = 0.0;
    double dc_offset = 0.0;         ///< mean level shift relative to the noiseless curve
    double modulation_depth = 0.0;  ///< |gamma|
    double relative_contrast = 0.0; ///< fringe amplitude over mean level
};

RefocusedInterferogram refocused_interferogram(std::span<const double> phi_grid, const NoiseModel& noise,
                                               double omega, const PhysicalParams& params,
                                               double mu = 3.141592653589793, const CoherenceOptions& opts = {});

/// Five-blade averaged H intensity over [0, 2pi)^2; values are row-major with
/// phi as the row index.
struct DensityMap {
    std::vector<double> phi_grid;
    std::vector<double> chi_grid;
    std::vector<double> values;
    double omega = 0.0;
    Amplitude gamma{1.0};
    Amplitude gamma_prime{1.0};

    double at(std::size_t i_phi, std::size_t j_chi) const { return values[i_phi * chi_grid.size() + j_chi]; }
};

DensityMap density_map(double omega, std::size_t grid_n, const NoiseModel& noise, const PhysicalParams& params,
                       const CoherenceOptions& opts = {});

struct SweepCurve {
    std::vector<double> omega_grid;
    NoiseAxis axis = NoiseAxis::Y;
    std::vector<GeometryKind> kinds;
    std::vector<std::vector<double>> gamma_abs;  ///< [kind][omega]
};

/// |gamma| per geometry and omega; the five-blade entry is the symmetric
/// branch, the one seen along the refocusing lines.
SweepCurve coherence_sweep(std::span<const GeometryKind> kinds, const NoiseModel& noise,
                           std::span<const double> omega_grid, const PhysicalParams& params,
                           const CoherenceOptions& opts = {});

}  // namespace nisim
