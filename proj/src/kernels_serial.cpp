#include <cmath>
#include <numbers>
#include <random>

#include "nisim/kernels.hpp"

namespace nisim::kernels {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) { return splitmix64(splitmix64(seed) ^ block); }

PhaseSums mc_block(const PhaseFunction& phase, std::size_t count, std::uint64_t seed, std::uint64_t block) {
    std::mt19937_64 gen(block_seed(seed, block));
    PhaseSums s;
    for (std::size_t i = 0; i < count; ++i) {
        const double varphi = static_cast<double>(gen() >> 11) * 0x1.0p-53 * kTwoPi;
        const double p = phase(varphi);
        const double c = std::cos(p);
        const double sn = std::sin(p);
        s.sum_cos += c;
        s.sum_sin += sn;
        s.sum_cos2 += c * c;
        s.sum_sin2 += sn * sn;
    }
    s.n = count;
    return s;
}

double five_blade_h(const FiveBladeGamma& g, double phi, double chi) {
    const double sym = std::abs(g.gamma) * std::cos(chi - phi + std::arg(g.gamma));
    const double anti = std::abs(g.gamma_prime) * std::cos(chi + phi + std::arg(g.gamma_prime));
    return 0.25 * (2.0 - sym + anti);
}

namespace serial {

PhaseSums mc_phase_sums(const PhaseFunction& phase, std::size_t n, std::uint64_t seed) {
    const std::size_t blocks = (n + kMonteCarloBlock - 1) / kMonteCarloBlock;
    PhaseSums total;
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t count = std::min(kMonteCarloBlock, n - b * kMonteCarloBlock);
        const PhaseSums s = mc_block(phase, count, seed, b);
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
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double chi = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
            values[i * n + j] = five_blade_h(g, phi, chi);
        }
    }
    return values;
}

std::vector<CoherenceResult> coherence_batch(std::span<const PhaseFunction> phases, double tol) {
    std::vector<CoherenceResult> out;
    out.reserve(phases.size());
    for (const PhaseFunction& f : phases) out.push_back(coherence_quadrature(f, tol));
    return out;
}

std::vector<DDAverage> dd_average_batch(std::span<const double> centers, double sigma, const DDProfile& profile,
                                        PhaseWeight weight, const QuadratureOptions& opts) {
    std::vector<DDAverage> out;
    out.reserve(centers.size());
    for (double c : centers) out.push_back(average_dd(MomentumDistribution{sigma, c}, profile, weight, opts));
    return out;
}

}  // namespace serial

}  // namespace nisim::kernels
