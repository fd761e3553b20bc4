#include "nisim/vibration.hpp"

#include <cmath>
#include <numbers>

#include "nisim/errors.hpp"
#include "nisim/kernels.hpp"
#include "nisim/materials.hpp"
#include "nisim/quadrature.hpp"
#include "nisim/special.hpp"

namespace nisim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw ValidationError(std::string(what) + " must be positive and finite");
    }
}

}  // namespace

PhysicalParams::PhysicalParams(double wavelength, double d_spacing, double L, double mass, double hbar,
                               double planck)
    : wavelength_(wavelength), d_spacing_(d_spacing), L_(L), mass_(mass), hbar_(hbar), planck_(planck) {
    require_positive(wavelength, "wavelength");
    require_positive(d_spacing, "d-spacing");
    require_positive(L, "blade separation L");
    require_positive(mass, "mass");
    require_positive(hbar, "hbar");
    require_positive(planck, "Planck constant");
    (void)nisim::bragg_angle(wavelength, d_spacing);
}

PhysicalParams PhysicalParams::defaults() {
    return PhysicalParams(4.4e-10, find_reflection("Si111").d_spacing, 0.05);
}

double PhysicalParams::speed() const { return planck_ / (mass_ * wavelength_); }
double PhysicalParams::bragg_angle() const { return nisim::bragg_angle(wavelength_, d_spacing_); }
double PhysicalParams::v_parallel() const { return speed() * std::sin(bragg_angle()); }
double PhysicalParams::v_perp() const { return speed() * std::cos(bragg_angle()); }
double PhysicalParams::tau() const { return L_ / v_perp(); }

std::string_view to_string(NoiseAxis axis) { return axis == NoiseAxis::Y ? "y" : "z"; }

std::string_view to_string(CoherenceMethod method) {
    switch (method) {
        case CoherenceMethod::ClosedForm: return "closed_form";
        case CoherenceMethod::Quadrature: return "quadrature";
        case CoherenceMethod::MonteCarlo: return "monte_carlo";
    }
    return "?";
}

void NoiseSpec::validate() const {
    if (!std::isfinite(amplitude) || amplitude < 0.0) throw ValidationError("noise amplitude must be >= 0");
    if (!std::isfinite(omega) || omega < 0.0) throw ValidationError("noise omega must be >= 0");
    if (!std::isfinite(varphi) || varphi < 0.0 || varphi >= kTwoPi) {
        throw ValidationError("arrival phase must lie in [0, 2pi)");
    }
}

NoiseKinematics noise_kinematics(const NoiseSpec& spec, double t) {
    spec.validate();
    const double w = spec.omega;
    const double arg = w * t + spec.varphi;
    const double a = spec.amplitude;
    return {a * w * std::cos(arg), -a * w * w * std::sin(arg), -a * w * w * w * std::cos(arg)};
}

LoopPhases loop_phases_exact(GeometryKind kind, const NoiseSpec& spec, const PhysicalParams& params) {
    const NoiseKinematics k = noise_kinematics(spec, 0.0);
    const double m_hbar = params.mass() / params.hbar();
    const double tau = params.tau();
    const double v = params.v_parallel();
    LoopPhases out;

    if (spec.axis == NoiseAxis::Y) {
        const double u = k.first;
        const double du = k.second;
        const double ddu = k.third;
        const double bracket = v - u;
        const double c = 4.0 * m_hbar * tau * tau * bracket;
        if (kind == GeometryKind::ThreeBlade) {
            out.total_sym = 8.0 * c * du;
            return out;
        }
        out.dPhi1 = -c * (2.0 * du + tau * ddu);
        out.dPhi2 = c * (2.0 * du + 7.0 * tau * ddu);
        out.total_sym = *out.dPhi1 + *out.dPhi2;
        if (kind == GeometryKind::FiveBlade) {
            // Second loop of the reflected-middle trajectories; the leading
            // term is read as 2 u'(0).
            out.dPhi2_anti = -c * (2.0 * du + 3.0 * tau * ddu);
            out.total_anti = *out.dPhi1 + *out.dPhi2_anti;
        }
        return out;
    }

    const double L = params.L();
    const double dtheta = k.first;
    const double ddtheta = k.second;
    const double bracket = v - 2.0 * L * dtheta;
    const double c = 8.0 * m_hbar * tau * bracket;
    if (kind == GeometryKind::ThreeBlade) {
        out.total_sym = 4.0 * c * L * dtheta;
        return out;
    }
    out.dPhi1 = c * (L * dtheta - L * tau * ddtheta);
    out.dPhi2 = -c * (L * dtheta + 5.0 * L * tau * ddtheta);
    out.total_sym = *out.dPhi1 + *out.dPhi2;
    if (kind == GeometryKind::FiveBlade) {
        out.dPhi2_anti = c * (L * dtheta + L * tau * ddtheta);
        out.total_anti = *out.dPhi1 + *out.dPhi2_anti;
    }
    return out;
}

double LowFrequencyLaw::operator()(double omega, double varphi) const {
    const double t = trig == Trig::Sin ? std::sin(varphi) : std::cos(varphi);
    return prefactor * std::pow(omega, power) * t;
}

LowFrequencyLaw lowfreq_law(GeometryKind kind, NoiseAxis axis, Branch branch, const PhysicalParams& params,
                            double amplitude) {
    using Trig = LowFrequencyLaw::Trig;
    if (branch == Branch::Antisymmetric && kind != GeometryKind::FiveBlade) {
        throw UsageError("the antisymmetric branch exists only in the five-blade geometry");
    }
    const double m_hbar = params.mass() / params.hbar();
    const double tau = params.tau();
    const double tau2 = tau * tau;
    const double v = params.v_parallel();
    if (axis == NoiseAxis::Y) {
        const double base = m_hbar * v * amplitude;
        if (branch == Branch::Antisymmetric) return {16.0 * base * tau2, 2, Trig::Sin};
        if (kind == GeometryKind::ThreeBlade) return {32.0 * base * tau2, 2, Trig::Sin};
        return {24.0 * base * tau2 * tau, 3, Trig::Cos};
    }
    const double base = m_hbar * params.v_perp() * v * amplitude;
    if (branch == Branch::Antisymmetric) return {16.0 * base * tau2, 1, Trig::Sin};
    if (kind == GeometryKind::ThreeBlade) return {32.0 * base * tau2, 1, Trig::Cos};
    return {-48.0 * base * tau2 * tau, 2, Trig::Sin};
}

LowFrequencyPhases loop_phase_lowfreq(GeometryKind kind, const NoiseSpec& spec, const PhysicalParams& params) {
    spec.validate();
    LowFrequencyPhases out{
        lowfreq_law(kind, spec.axis, Branch::Symmetric, params, spec.amplitude)(spec.omega, spec.varphi),
        std::nullopt};
    if (kind == GeometryKind::FiveBlade) {
        out.total_anti =
            lowfreq_law(kind, spec.axis, Branch::Antisymmetric, params, spec.amplitude)(spec.omega, spec.varphi);
    }
    return out;
}

BranchCoherence coherence_closed_form(GeometryKind kind, NoiseAxis axis, double omega,
                                      const PhysicalParams& params, double amplitude) {
    if (!std::isfinite(omega) || omega < 0.0) throw ValidationError("omega must be >= 0");
    auto evaluate = [&](Branch b) {
        const LowFrequencyLaw law = lowfreq_law(kind, axis, b, params, amplitude);
        CoherenceResult r;
        r.gamma = bessel_j0(std::abs(law.prefactor) * std::pow(omega, law.power));
        r.method = CoherenceMethod::ClosedForm;
        return r;
    };
    BranchCoherence out{evaluate(Branch::Symmetric), std::nullopt};
    if (kind == GeometryKind::FiveBlade) out.antisymmetric = evaluate(Branch::Antisymmetric);
    return out;
}

CoherenceResult coherence_quadrature(const PhaseFunction& phase, double tol) {
    if (!(tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");
    QuadratureOptions opts;
    // The result is divided by 2 pi afterwards.
    opts.abs_tol = tol * kTwoPi;
    const QuadratureResult q = integrate(
        [&](double varphi) { return std::polar(1.0, phase(varphi)); }, 0.0, kTwoPi, opts);
    CoherenceResult r;
    r.gamma = q.value / kTwoPi;
    r.method = CoherenceMethod::Quadrature;
    r.error_estimate = q.error_estimate / kTwoPi;
    r.samples = q.evaluations;
    return r;
}

CoherenceResult coherence_montecarlo(const PhaseFunction& phase, std::size_t n, std::uint64_t seed, Exec exec) {
    if (n < 1000) throw ValidationError("Monte Carlo coherence needs at least 1000 samples");
    const kernels::PhaseSums s =
        exec == Exec::Serial ? kernels::serial::mc_phase_sums(phase, n, seed) : kernels::omp::mc_phase_sums(phase, n, seed);
    const double nn = static_cast<double>(s.n);
    const double mc = s.sum_cos / nn;
    const double ms = s.sum_sin / nn;
    const double var_c = std::max(0.0, (s.sum_cos2 / nn - mc * mc) * nn / (nn - 1.0));
    const double var_s = std::max(0.0, (s.sum_sin2 / nn - ms * ms) * nn / (nn - 1.0));
    CoherenceResult r;
    r.gamma = {mc, ms};
    r.method = CoherenceMethod::MonteCarlo;
    r.std_error_re = std::sqrt(var_c / nn);
    r.std_error_im = std::sqrt(var_s / nn);
    r.std_error = std::hypot(r.std_error_re, r.std_error_im);
    r.samples = s.n;
    return r;
}

PhaseFunction loop_phase_function(GeometryKind kind, NoiseAxis axis, Branch branch, double omega,
                                  double amplitude, const PhysicalParams& params, PhaseModel model) {
    if (model == PhaseModel::LowFrequency) {
        const LowFrequencyLaw law = lowfreq_law(kind, axis, branch, params, amplitude);
        return [law, omega](double varphi) { return law(omega, varphi); };
    }
    if (branch == Branch::Antisymmetric && kind != GeometryKind::FiveBlade) {
        throw UsageError("the antisymmetric branch exists only in the five-blade geometry");
    }
    return [=](double varphi) {
        NoiseSpec spec{axis, amplitude, omega, std::fmod(varphi, kTwoPi)};
        if (spec.varphi < 0.0) spec.varphi += kTwoPi;
        const LoopPhases p = loop_phases_exact(kind, spec, params);
        return branch == Branch::Symmetric ? p.total_sym : *p.total_anti;
    };
}

}  // namespace nisim
