#pragma once

// Data-parallel kernels. Every kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::omp; the two agree
// bitwise because work is split into fixed, index-ordered pieces whose
// partial results are combined in index order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nisim/dyndiff.hpp"
#include "nisim/quadrature.hpp"
#include "nisim/vibration.hpp"

namespace nisim::kernels {

/// Samples per Monte Carlo block; each block owns a generator seeded from
/// (seed, block index).
inline constexpr std::size_t kMonteCarloBlock = 8192;

struct PhaseSums {
    double sum_cos = 0.0;
    double sum_sin = 0.0;
    double sum_cos2 = 0.0;
    double sum_sin2 = 0.0;
    std::size_t n = 0;
};

/// Generator seed for one Monte Carlo block (seed and block index mixed through splitmix64).
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block);

struct FiveBladeGamma {
    Amplitude gamma;        ///< symmetric branch
    Amplitude gamma_prime;  ///< antisymmetric branch
};

namespace serial {
PhaseSums mc_phase_sums(const PhaseFunction& phase, std::size_t n, std::uint64_t seed);
/// Five-blade averaged H-port intensity on an n x n grid over [0, 2pi)^2,
/// row-major with phi as the row index.
std::vector<double> density_values(const FiveBladeGamma& g, std::size_t n);
std::vector<CoherenceResult> coherence_batch(std::span<const PhaseFunction> phases, double tol);
std::vector<DDAverage> dd_average_batch(std::span<const double> centers, double sigma, const DDProfile& profile,
                                        PhaseWeight weight, const QuadratureOptions& opts);
}  // namespace serial

namespace omp {
PhaseSums mc_phase_sums(const PhaseFunction& phase, std::size_t n, std::uint64_t seed);
std::vector<double> density_values(const FiveBladeGamma& g, std::size_t n);
std::vector<CoherenceResult> coherence_batch(std::span<const PhaseFunction> phases, double tol);
std::vector<DDAverage> dd_average_batch(std::span<const double> centers, double sigma, const DDProfile& profile,
                                        PhaseWeight weight, const QuadratureOptions& opts);
}  // namespace omp

/// Shared per-point evaluators used by both variants.
PhaseSums mc_block(const PhaseFunction& phase, std::size_t count, std::uint64_t seed, std::uint64_t block);
double five_blade_h(const FiveBladeGamma& g, double phi, double chi);

}  // namespace nisim::kernels
