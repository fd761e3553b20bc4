#include "nisim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nisim/errors.hpp"
#include "nisim/kernels.hpp"

namespace nisim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kAntiSeedSalt = 0x9e3779b97f4a7c15ULL;

CoherenceResult branch_coherence(GeometryKind kind, Branch branch, const NoiseModel& noise, double omega,
                                 const PhysicalParams& params, const CoherenceOptions& opts, std::uint64_t seed) {
    const PhaseFunction f = loop_phase_function(kind, noise.axis, branch, omega, noise.amplitude, params, opts.model);
    if (opts.method == CoherenceMethod::MonteCarlo) return coherence_montecarlo(f, opts.mc_samples, seed, opts.exec);
    return coherence_quadrature(f, opts.tol);
}

void check_grid(std::span<const double> grid, const char* what) {
    if (grid.empty()) throw ValidationError(std::string(what) + " grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw ValidationError(std::string(what) + " grid has a non-finite entry");
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw ValidationError(std::string(what) + " grid must be strictly increasing");
        }
    }
}

}  // namespace

NoiseModel NoiseModel::defaults(NoiseAxis axis) { return {axis, 1e-7}; }

BranchCoherence coherence(GeometryKind kind, const NoiseModel& noise, double omega, const PhysicalParams& params,
                          const CoherenceOptions& opts) {
    if (opts.method == CoherenceMethod::ClosedForm) {
        return coherence_closed_form(kind, noise.axis, omega, params, noise.amplitude);
    }
    BranchCoherence out{branch_coherence(kind, Branch::Symmetric, noise, omega, params, opts, opts.seed),
                        std::nullopt};
    if (kind == GeometryKind::FiveBlade) {
        out.antisymmetric =
            branch_coherence(kind, Branch::Antisymmetric, noise, omega, params, opts, opts.seed ^ kAntiSeedSalt);
    }
    return out;
}

double contrast(const Interferogram& curve) {
    if (curve.intensity.empty()) throw ValidationError("contrast of an empty curve");
    const auto [lo, hi] = std::minmax_element(curve.intensity.begin(), curve.intensity.end());
    if (*hi + *lo <= 0.0) throw ValidationError("contrast undefined for an all-zero curve");
    return (*hi - *lo) / (*hi + *lo);
}

Interferogram averaged_interferogram(GeometryKind kind, const NoiseModel& noise, double omega,
                                     const PhysicalParams& params, ExitPort port, std::span<const double> phase_grid,
                                     double chi, const CoherenceOptions& opts) {
    if (port == ExitPort::Loss) throw UsageError("interferograms exist only for the O and H ports");
    check_grid(phase_grid, "phase");
    const BranchCoherence g = coherence(kind, noise, omega, params, opts);

    Interferogram out;
    out.phase_grid.assign(phase_grid.begin(), phase_grid.end());
    out.port = port;
    out.kind = kind;
    out.omega = omega;
    out.chi = kind == GeometryKind::FiveBlade ? chi : 0.0;
    out.gamma = g.symmetric.gamma;
    if (g.antisymmetric) out.gamma_prime = g.antisymmetric->gamma;

    const double mag = std::abs(out.gamma);
    const double arg = std::arg(out.gamma);
    out.intensity.reserve(phase_grid.size());
    for (double phi : phase_grid) {
        double i_o = 0.0;
        switch (kind) {
            case GeometryKind::ThreeBlade:
                i_o = 0.5 * (1.0 + mag * std::cos(phi + arg));
                break;
            case GeometryKind::FourBlade:
                i_o = 1.0 - 0.5 * (1.0 + mag * std::cos(phi + arg));
                break;
            case GeometryKind::FiveBlade:
                i_o = 1.0 - kernels::five_blade_h({out.gamma, *out.gamma_prime}, phi, chi);
                break;
        }
        out.intensity.push_back(port == ExitPort::O ? i_o : 1.0 - i_o);
    }
    return out;
}

RefocusedInterferogram refocused_interferogram(std::span<const double> phi_grid, const NoiseModel& noise,
                                               double omega, const PhysicalParams& params, double mu,
                                               const CoherenceOptions& opts) {
    check_grid(phi_grid, "phi");
    if (!std::isfinite(mu)) throw ValidationError("mu must be finite");
    const BranchCoherence g = coherence(GeometryKind::FiveBlade, noise, omega, params, opts);
    const kernels::FiveBladeGamma fg{g.symmetric.gamma, g.antisymmetric->gamma};

    RefocusedInterferogram out;
    out.mu = mu;
    Interferogram& c = out.curve;
    c.phase_grid.assign(phi_grid.begin(), phi_grid.end());
    c.port = ExitPort::H;
    c.kind = GeometryKind::FiveBlade;
    c.omega = omega;
    c.chi = mu;  // the line chi = mu - phi
    c.gamma = fg.gamma;
    c.gamma_prime = fg.gamma_prime;
    c.intensity.reserve(phi_grid.size());
    for (double phi : phi_grid) c.intensity.push_back(kernels::five_blade_h(fg, phi, mu - phi));

    // Along the line I_H = (2 + |g'| cos(mu + arg g') - |g| cos(mu - 2 phi + arg g)) / 4.
    const double mean = (2.0 + std::abs(fg.gamma_prime) * std::cos(mu + std::arg(fg.gamma_prime))) / 4.0;
    const double quiet_mean = (2.0 + std::cos(mu)) / 4.0;
    out.dc_offset = mean - quiet_mean;
    out.modulation_depth = std::abs(fg.gamma);
    out.relative_contrast = out.modulation_depth / (4.0 * mean);
    return out;
}

DensityMap density_map(double omega, std::size_t grid_n, const NoiseModel& noise, const PhysicalParams& params,
                       const CoherenceOptions& opts) {
    if (grid_n < 16) throw ValidationError("density map needs grid_n >= 16");
    const BranchCoherence g = coherence(GeometryKind::FiveBlade, noise, omega, params, opts);
    const kernels::FiveBladeGamma fg{g.symmetric.gamma, g.antisymmetric->gamma};

    DensityMap map;
    map.omega = omega;
    map.gamma = fg.gamma;
    map.gamma_prime = fg.gamma_prime;
    map.phi_grid.resize(grid_n);
    for (std::size_t i = 0; i < grid_n; ++i) map.phi_grid[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(grid_n);
    map.chi_grid = map.phi_grid;
    map.values = opts.exec == Exec::Serial ? kernels::serial::density_values(fg, grid_n)
                                           : kernels::omp::density_values(fg, grid_n);
    return map;
}

SweepCurve coherence_sweep(std::span<const GeometryKind> kinds, const NoiseModel& noise,
                           std::span<const double> omega_grid, const PhysicalParams& params,
                           const CoherenceOptions& opts) {
    if (kinds.empty()) throw ValidationError("no geometries selected");
    check_grid(omega_grid, "omega");
    if (omega_grid.front() < 0.0) throw ValidationError("omega must be >= 0");

    SweepCurve out;
    out.omega_grid.assign(omega_grid.begin(), omega_grid.end());
    out.axis = noise.axis;
    out.kinds.assign(kinds.begin(), kinds.end());
    out.gamma_abs.assign(kinds.size(), std::vector<double>(omega_grid.size()));

    switch (opts.method) {
        case CoherenceMethod::ClosedForm:
            for (std::size_t k = 0; k < kinds.size(); ++k) {
                for (std::size_t i = 0; i < omega_grid.size(); ++i) {
                    out.gamma_abs[k][i] = std::abs(
                        coherence_closed_form(kinds[k], noise.axis, omega_grid[i], params, noise.amplitude)
                            .symmetric.gamma);
                }
            }
            break;
        case CoherenceMethod::Quadrature: {
            std::vector<PhaseFunction> phases;
            phases.reserve(kinds.size() * omega_grid.size());
            for (GeometryKind kind : kinds) {
                for (double w : omega_grid) {
                    phases.push_back(loop_phase_function(kind, noise.axis, Branch::Symmetric, w, noise.amplitude,
                                                         params, opts.model));
                }
            }
            const std::vector<CoherenceResult> r = opts.exec == Exec::Serial
                                                       ? kernels::serial::coherence_batch(phases, opts.tol)
                                                       : kernels::omp::coherence_batch(phases, opts.tol);
            for (std::size_t k = 0; k < kinds.size(); ++k) {
                for (std::size_t i = 0; i < omega_grid.size(); ++i) {
                    out.gamma_abs[k][i] = std::abs(r[k * omega_grid.size() + i].gamma);
                }
            }
            break;
        }
        case CoherenceMethod::MonteCarlo:
            for (std::size_t k = 0; k < kinds.size(); ++k) {
                for (std::size_t i = 0; i < omega_grid.size(); ++i) {
                    const PhaseFunction f = loop_phase_function(kinds[k], noise.axis, Branch::Symmetric,
                                                                omega_grid[i], noise.amplitude, params, opts.model);
                    out.gamma_abs[k][i] =
                        std::abs(coherence_montecarlo(f, opts.mc_samples, opts.seed ^ i, opts.exec).gamma);
                }
            }
            break;
    }
    return out;
}

}  // namespace nisim
