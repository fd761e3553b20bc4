#include "nisim/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include "nisim/analysis.hpp"
#include "nisim/dyndiff.hpp"
#include "nisim/errors.hpp"
#include "nisim/fit.hpp"
#include "nisim/geometry.hpp"
#include "nisim/materials.hpp"
#include "nisim/special.hpp"
#include "nisim/vibration.hpp"

namespace nisim::acceptance {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

std::string format(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::vector<double> grid(double lo, double hi, std::size_t n, bool include_end) {
    std::vector<double> g(n);
    const double step = (hi - lo) / static_cast<double>(include_end ? n - 1 : n);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
    return g;
}

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// 1. Matrix-assembled intensities against the printed formulas.
Outcome closed_form_oracle() {
    const auto t0 = Clock::now();
    const std::vector<double> g = grid(0.0, kTwoPi, 50, false);
    double worst = 0.0;
    for (GeometryKind kind : kAllGeometries) {
        for (double phi : g) {
            for (double chi : g) {
                for (double beta : g) {
                    const InterferometerSpec spec{kind, BladeParams::balanced(beta), phi, chi};
                    const DetectorIntensities m = intensities(assemble(spec), PathState::path_I());
                    const DetectorIntensities c = closed_form_intensity(kind, phi, chi, beta);
                    worst = std::max({worst, std::abs(m.O - c.O), std::abs(m.H - c.H)});
                }
            }
        }
    }
    const double t = seconds_since(t0);
    return {worst < 1e-12 && t < 5.0, format("max |matrix - formula| = %.3g (< 1e-12), %.2f s (< 5 s)", worst, t)};
}

// 2. beta independence for three/five blades, phi + 2 beta dependence for four.
Outcome refocusing_invariants() {
    const std::vector<double> betas = grid(0.0, kTwoPi, 100, false);
    const std::vector<double> flags = grid(0.0, kTwoPi, 24, false);
    double spread_35 = 0.0;
    double shift_4 = 0.0;
    for (double phi : flags) {
        for (double chi : flags) {
            for (GeometryKind kind : {GeometryKind::ThreeBlade, GeometryKind::FiveBlade}) {
                double lo = 2.0;
                double hi = -1.0;
                for (double beta : betas) {
                    const double io =
                        intensities(assemble({kind, BladeParams::balanced(beta), phi, chi}), PathState::path_I()).O;
                    lo = std::min(lo, io);
                    hi = std::max(hi, io);
                }
                spread_35 = std::max(spread_35, hi - lo);
            }
        }
        for (double beta : betas) {
            const double a =
                intensities(assemble({GeometryKind::FourBlade, BladeParams::balanced(beta), phi}), PathState::path_I()).O;
            const double b = intensities(assemble({GeometryKind::FourBlade, BladeParams::balanced(0.0), phi + 2.0 * beta}),
                                         PathState::path_I())
                                 .O;
            shift_4 = std::max(shift_4, std::abs(a - b));
        }
    }
    return {spread_35 < 1e-12 && shift_4 < 1e-12,
            format("3/5-blade spread over beta = %.3g, |I_O4(phi,b) - I_O4(phi+2b,0)| = %.3g (both < 1e-12)",
                   spread_35, shift_4)};
}

// 3. Path enumeration against the matrix product, and physical throughputs.
Outcome path_enumeration() {
    std::mt19937_64 gen(0x5eed0003);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const GeometryKind kind = kAllGeometries[gen() % 3];
        const InterferometerSpec spec{kind, {uniform(gen, 0.0, kPi), uniform(gen, -kPi, kPi)},
                                      uniform(gen, 0.0, kTwoPi), uniform(gen, 0.0, kTwoPi)};
        const DetectorIntensities m = intensities(assemble(spec), PathState::path_I());
        const DetectorIntensities p = path_sum_intensities(enumerate_paths(spec));
        worst = std::max({worst, std::abs(m.O - p.O), std::abs(m.H - p.H)});
    }
    const double expected[] = {0.5, 0.25, 0.25};
    double tp[3];
    bool tp_ok = true;
    for (int k = 0; k < 3; ++k) {
        tp[k] = throughput({kAllGeometries[k], BladeParams::balanced(0.3), 0.7, 1.1}, true);
        tp_ok = tp_ok && std::abs(tp[k] - expected[k]) < 1e-12;
    }
    return {worst < 1e-12 && tp_ok,
            format("max |paths - matrix| = %.3g over 1000 specs; throughput 3/4/5 = %.15g / %.15g / %.15g",
                   worst, tp[0], tp[1], tp[2])};
}

// 4. Quadrature against J0, Monte Carlo against quadrature.
Outcome bessel_quadrature() {
    double worst = 0.0;
    for (double K : grid(0.0, 10.0, 50, true)) {
        const CoherenceResult q = coherence_quadrature([K](double v) { return K * std::sin(v); });
        worst = std::max(worst, std::abs(q.gamma - Amplitude(bessel_j0(K), 0.0)));
    }
    std::mt19937_64 gen(0x5eed0004);
    int outside = 0;
    double worst_ratio = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double a = uniform(gen, 0.5, 6.0);
        const double b = uniform(gen, 0.0, kTwoPi);
        const double c = uniform(gen, 0.0, 2.0);
        const double d = uniform(gen, -kPi, kPi);
        const PhaseFunction f = [=](double v) { return a * std::sin(v + b) + c * std::cos(2.0 * v) + d; };
        const CoherenceResult q = coherence_quadrature(f);
        const CoherenceResult mc = coherence_montecarlo(f, 100000, 1000 + static_cast<std::uint64_t>(i));
        const double ratio = std::abs(mc.gamma - q.gamma) / mc.std_error;
        worst_ratio = std::max(worst_ratio, ratio);
        if (ratio >= 3.0) ++outside;
    }
    return {worst < 1e-8 && outside == 0,
            format("max |quad - J0| = %.3g (< 1e-8); MC outside 3 stderr: %d/100 (worst %.2f stderr)", worst,
                   outside, worst_ratio)};
}

// 5. Five-blade DC offset and relative contrast at omega = 100.
Outcome dc_offset_anchor() {
    const auto t0 = Clock::now();
    const PhysicalParams p = PhysicalParams::defaults();
    const std::vector<double> phi = grid(0.0, kTwoPi, 720, false);
    const RefocusedInterferogram r = refocused_interferogram(phi, NoiseModel::defaults(NoiseAxis::Y), 100.0, p);
    const double offset = 1.0 - r.curve.gamma_prime->real();
    const double rel = r.modulation_depth / (2.0 - r.curve.gamma_prime->real());
    const double eq1 = contrast(r.curve);
    const double t = seconds_since(t0);
    const bool ok = offset >= 0.15 && offset <= 0.27 && rel >= 0.77 && rel <= 0.87 && t < 1.0;
    return {ok, format("1 - gamma' = %.4f in [0.15, 0.27]; |gamma|/(2 - gamma') = %.4f in [0.77, 0.87] "
                       "(max/min contrast of the curve %.4f); %.3f s (< 1 s)",
                       offset, rel, eq1, t)};
}

// 6. y-noise sweep.
Outcome y_sweep() {
    const PhysicalParams p = PhysicalParams::defaults();
    const NoiseModel noise = NoiseModel::defaults(NoiseAxis::Y);
    const std::vector<double> omega = grid(0.0, 400.0, 801, true);
    const SweepCurve s = coherence_sweep(kAllGeometries, noise, omega, p);

    double min_45 = 1.0;
    for (std::size_t i = 0; i < omega.size() && omega[i] <= 250.0; ++i) {
        min_45 = std::min({min_45, s.gamma_abs[1][i], s.gamma_abs[2][i]});
    }

    const auto re3 = [&](double w) { return coherence(GeometryKind::ThreeBlade, noise, w, p).symmetric.gamma.real(); };
    std::size_t k = 1;
    while (k < omega.size() && re3(omega[k]) > 0.0) ++k;
    if (k == omega.size()) return {false, "three-blade gamma has no zero below omega = 400"};
    double lo = omega[k - 1];
    double hi = omega[k];
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (re3(mid) > 0.0 ? lo : hi) = mid;
    }
    const double zero = 0.5 * (lo + hi);

    bool monotone = true;
    for (std::size_t i = 1; i < k; ++i) {
        if (s.gamma_abs[0][i] > s.gamma_abs[0][i - 1] + 1e-12) monotone = false;
    }
    const bool ok = min_45 >= 0.99 && std::abs(zero - 110.9) <= 0.5 && monotone;
    return {ok, format("min 4/5-blade |gamma| for omega <= 250 = %.5f (>= 0.99); three-blade first zero at "
                       "omega = %.3f (110.9 +- 0.5); monotone before zero: %s",
                       min_45, zero, monotone ? "yes" : "no")};
}

// 7. z-noise sweep.
Outcome z_sweep() {
    const PhysicalParams p = PhysicalParams::defaults();
    const NoiseModel noise = NoiseModel::defaults(NoiseAxis::Z);
    const double omega_z = std::abs(lowfreq_law(GeometryKind::ThreeBlade, NoiseAxis::Z, Branch::Symmetric, p, noise.amplitude).prefactor);
    const double g44 = std::abs(coherence(GeometryKind::ThreeBlade, noise, 4.4, p).symmetric.gamma);
    const double ref = std::abs(bessel_j0(omega_z * 4.4));

    const std::vector<double> omega = grid(0.0, 100.0, 1001, true);
    const SweepCurve s = coherence_sweep(kAllGeometries, noise, omega, p);
    double min_45 = 1.0;
    double argmin_45 = 0.0;
    double min_3 = 1.0;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        for (int k : {1, 2}) {
            if (s.gamma_abs[k][i] < min_45) {
                min_45 = s.gamma_abs[k][i];
                argmin_45 = omega[i];
            }
        }
        if (omega[i] <= 6.0) min_3 = std::min(min_3, s.gamma_abs[0][i]);
    }
    const bool ok = std::abs(g44 - ref) < 1e-6 && min_45 >= 0.999 && min_3 < 0.95;
    return {ok, format("three-blade |gamma(4.4)| = %.7f vs J0(Omega_z 4.4) = %.7f (Omega_z = %.6f); "
                       "min 4/5-blade |gamma| for omega <= 100 = %.5f at omega = %.1f (>= 0.999); "
                       "min three-blade |gamma| for omega <= 6 = %.4f (< 0.95)",
                       g44, ref, omega_z, min_45, argmin_45, min_3)};
}

// 8. Exact loop phases against the low-frequency laws, compared as
// amplitudes over the arrival phase.
Outcome lowfreq_limit() {
    const PhysicalParams p = PhysicalParams::defaults();
    struct Case {
        GeometryKind kind;
        NoiseAxis axis;
        Branch branch;
        const char* name;
    };
    const Case cases[] = {
        {GeometryKind::ThreeBlade, NoiseAxis::Y, Branch::Symmetric, "3y"},
        {GeometryKind::FourBlade, NoiseAxis::Y, Branch::Symmetric, "4y"},
        {GeometryKind::FiveBlade, NoiseAxis::Y, Branch::Antisymmetric, "5y'"},
        {GeometryKind::ThreeBlade, NoiseAxis::Z, Branch::Symmetric, "3z"},
        {GeometryKind::FourBlade, NoiseAxis::Z, Branch::Symmetric, "4z"},
        {GeometryKind::FiveBlade, NoiseAxis::Z, Branch::Antisymmetric, "5z'"},
    };
    const std::vector<double> phis = grid(0.0, kTwoPi, 7200, false);
    const auto amplitude = [&](const PhaseFunction& f) {
        double m = 0.0;
        for (double v : phis) m = std::max(m, std::abs(f(v)));
        return m;
    };
    bool ok = true;
    std::string detail;
    for (double wt : {1e-3, 1e-4}) {
        const double limit = wt == 1e-3 ? 1e-2 : 1e-4;
        const double omega = wt / p.tau();
        double worst = 0.0;
        const char* worst_name = "";
        for (const Case& c : cases) {
            const NoiseModel noise = NoiseModel::defaults(c.axis);
            const double exact = amplitude(
                loop_phase_function(c.kind, c.axis, c.branch, omega, noise.amplitude, p, PhaseModel::Exact));
            const double low = amplitude(
                loop_phase_function(c.kind, c.axis, c.branch, omega, noise.amplitude, p, PhaseModel::LowFrequency));
            const double rel = std::abs(exact - low) / exact;
            if (rel > worst) {
                worst = rel;
                worst_name = c.name;
            }
        }
        ok = ok && worst < limit;
        detail += format("%somega tau = %.0e: worst relative amplitude difference %.3g (%s, < %.0e)",
                         detail.empty() ? "" : "; ", wt, worst, worst_name, limit);
    }
    return {ok, detail};
}

// 9. Four-blade maximum contrast from dynamical-phase averaging.
Outcome dd_contrast() {
    const DDProfile profile = DDProfile::for_reflection(find_reflection("Si111"), 2.71e-10, 1e-3);
    const DDAverage a = average_dd(MomentumDistribution::from_width(4.26e-6, false), profile, PhaseWeight::Double);
    const bool ok = a.contrast >= 0.75 && a.contrast <= 0.95;
    return {ok, format("four-blade contrast = %.6f (target [0.75, 0.95]); A = pi D / Delta_H = %.4f, "
                       "y per urad = %.4f, truncation mass %.2g",
                       a.contrast, profile.pendellosung_phase(), profile.y_per_radian * 1e-6, a.truncation_mass)};
}

// 10. Fringe depths along the refocusing line and the gamma'-damped line.
Outcome dfs_lines() {
    const PhysicalParams p = PhysicalParams::defaults();
    const NoiseModel noise = NoiseModel::defaults(NoiseAxis::Y);
    const std::size_t n = 256;
    const double omega_anti =
        std::abs(lowfreq_law(GeometryKind::FiveBlade, NoiseAxis::Y, Branch::Antisymmetric, p, noise.amplitude).prefactor);

    const auto transect = [&](const DensityMap& m, bool dfs) {
        std::vector<double> x(n);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = dfs ? (n + n / 2 - i) % n : i;
            x[i] = m.phi_grid[i];
            y[i] = m.at(i, j);
        }
        return fit_fringe(x, y, 2);
    };

    const double depth0 = transect(density_map(0.0, n, noise, p), true).amplitude;
    bool ok = true;
    std::string detail = format("omega = 0 depth %.6f", depth0);
    for (double w : {100.0, 200.0, 250.0}) {
        const DensityMap m = density_map(w, n, noise, p);
        const double ddepth = std::abs(transect(m, true).amplitude - depth0);
        const double damping = 4.0 * transect(m, false).cos_coef;
        const double ref = bessel_j0(omega_anti * w * w);
        const bool pass = ddepth < 1e-3 && std::abs(damping - ref) < 1e-6;
        ok = ok && pass;
        detail += format("; omega %.0f: |depth - depth0| = %.3g (< 1e-3), |4b - J0(Omega' w^2)| = %.2g (< 1e-6)", w,
                         ddepth, std::abs(damping - ref));
    }
    return {ok, detail};
}

struct Criterion {
    const char* title;
    Outcome (*check)();
};

const Criterion kCriteria[kCriterionCount] = {
    {"closed-form intensity oracle", closed_form_oracle},
    {"refocusing invariants", refocusing_invariants},
    {"path-enumeration equivalence and throughput", path_enumeration},
    {"Bessel and Monte Carlo quadrature oracle", bessel_quadrature},
    {"five-blade DC offset and relative contrast at omega = 100", dc_offset_anchor},
    {"y-noise coherence sweep", y_sweep},
    {"z-noise coherence sweep", z_sweep},
    {"low-frequency limit of the exact loop phases", lowfreq_limit},
    {"four-blade dynamical-phase contrast", dd_contrast},
    {"refocusing-line depth on density maps", dfs_lines},
};

}  // namespace

std::string_view title(int id) {
    if (id < 1 || id > kCriterionCount) throw UsageError("unknown acceptance criterion " + std::to_string(id));
    return kCriteria[id - 1].title;
}

Result run(int id) {
    const std::string name(title(id));
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = kCriteria[id - 1].check();
    } catch (const Error& e) {
        o = {false, std::string("error: ") + e.what()};
    }
    return {id, name, o.pass, o.detail, seconds_since(t0)};
}

std::vector<Result> run_all(std::span<const int> ids) {
    std::vector<Result> out;
    if (ids.empty()) {
        for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run(id));
    } else {
        for (int id : ids) out.push_back(run(id));
    }
    return out;
}

void print(std::ostream& out, const std::vector<Result>& results) {
    for (const Result& r : results) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << "AC" << r.id << " " << r.title << ": " << r.detail
            << format(" [%.2f s]", r.seconds) << '\n';
    }
}

}  // namespace nisim::acceptance
