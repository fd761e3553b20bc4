#include <omp.h>

#include <cmath>
#include <exception>
#include <numbers>

#include "nisim/exec.hpp"
#include "nisim/kernels.hpp"

namespace nisim {

namespace {
int default_threads() {
    static const int n = omp_get_max_threads();
    return n;
}
}  // namespace

void set_thread_limit(int threads) {
    const int base = default_threads();
    omp_set_num_threads(threads > 0 ? threads : base);
}

}  // namespace nisim

namespace nisim::kernels::omp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Runs body(i) for i in [0, n) in parallel and rethrows the exception of the
// lowest failing index, so failures are reported as the serial loop would.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

PhaseSums mc_phase_sums(const PhaseFunction& phase, std::size_t n, std::uint64_t seed) {
    const std::size_t blocks = (n + kMonteCarloBlock - 1) / kMonteCarloBlock;
    std::vector<PhaseSums> partial(blocks);
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t count = std::min(kMonteCarloBlock, n - b * kMonteCarloBlock);
        partial[b] = mc_block(phase, count, seed, b);
    });
    PhaseSums total;
    for (const PhaseSums& s : partial) {
        total.sum_cos += s.sum_cos;
        total.sum_sin += s.sum_sin;
        total.sum_cos2 += s.sum_cos2;
        total.sum_sin2 += s.sum_sin2;
        total.n += s.n;
    }
    return total;
}

std::vector<double> density_values(const FiveBladeGamma& g, std::size_t n) {
    std::vector<double> values(n * n);
    const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const double phi = kTwoPi * static_cast<double>(ii) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double chi = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
            values[ii * n + j] = five_blade_h(g, phi, chi);
        }
    }
    return values;
}

std::vector<CoherenceResult> coherence_batch(std::span<const PhaseFunction> phases, double tol) {
    std::vector<CoherenceResult> out(phases.size());
    parallel_for(phases.size(), [&](std::size_t i) { out[i] = coherence_quadrature(phases[i], tol); });
    return out;
}

std::vector<DDAverage> dd_average_batch(std::span<const double> centers, double sigma, const DDProfile& profile,
                                        PhaseWeight weight, const QuadratureOptions& opts) {
    std::vector<DDAverage> out(centers.size());
    parallel_for(centers.size(), [&](std::size_t i) {
        out[i] = average_dd(MomentumDistribution{sigma, centers[i]}, profile, weight, opts);
    });
    return out;
}

}  // namespace nisim::kernels::omp
