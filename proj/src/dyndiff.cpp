#include "nisim/dyndiff.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nisim/errors.hpp"
#include "nisim/kernels.hpp"

namespace nisim {

namespace {

constexpr double kPi = std::numbers::pi;

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

struct BraggSide {
    double envelope;  // -A / (y + sqrt(1+y^2)), i.e. A (y - sqrt(1+y^2))
    Amplitude bracket;
};

// t(y) for y >= 0 written as e^{i envelope} * bracket. Both factors are free of
// the cancellation in e^{iAy} e^{-iX} for large y.
BraggSide bragg_side(double y, double A) {
    const double root = std::sqrt(1.0 + y * y);
    const double s = y / root;
    const double one_minus_s = 1.0 / (root * (y + root));
    const double X = A * root;
    const double c = std::cos(X);
    const double sn = std::sin(X);
    return {-A / (y + root), {c * c + s * sn * sn, one_minus_s * sn * c}};
}

double beta_nonnegative(double y, double A) {
    const BraggSide b = bragg_side(y, A);
    return b.envelope + std::atan2(b.bracket.imag(), b.bracket.real());
}

}  // namespace

void BetaTable::validate() const {
    if (delta_theta.size() != beta.size()) throw ValidationError("beta table columns differ in length");
    if (delta_theta.size() < 2) throw ValidationError("beta table needs at least two rows");
    for (std::size_t i = 0; i < delta_theta.size(); ++i) {
        if (!std::isfinite(delta_theta[i]) || !std::isfinite(beta[i])) {
            throw ValidationError("beta table row " + std::to_string(i + 1) + " is not finite");
        }
        if (i > 0 && !(delta_theta[i] > delta_theta[i - 1])) {
            throw ValidationError("beta table first column must be strictly increasing (row " +
                                  std::to_string(i + 1) + ")");
        }
    }
}

double BetaTable::lookup(double x) const {
    if (!(x >= delta_theta.front() && x <= delta_theta.back())) {
        throw RangeError("delta_theta " + std::to_string(x) + " rad lies outside the tabulated range");
    }
    const auto hi = std::lower_bound(delta_theta.begin(), delta_theta.end(), x);
    const std::size_t j = static_cast<std::size_t>(hi - delta_theta.begin());
    if (delta_theta[j] == x) return beta[j];
    const std::size_t i = j - 1;
    const double w = (x - delta_theta[i]) / (delta_theta[j] - delta_theta[i]);
    return beta[i] + w * (beta[j] - beta[i]);
}

BetaTable read_beta_table(std::istream& in) {
    BetaTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        double urad = 0.0;
        double beta = 0.0;
        if (!(fields >> urad)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw ParseError(lineno, "expected two numeric columns");
        }
        std::string extra;
        if (!(fields >> beta) || (fields >> extra)) throw ParseError(lineno, "expected two numeric columns");
        table.delta_theta.push_back(urad * 1e-6);
        table.beta.push_back(beta);
    }
    table.validate();
    return table;
}

BetaTable read_beta_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open beta table '" + path + "'");
    return read_beta_table(in);
}

void DDProfile::validate() const {
    if (tabulated()) {
        table->validate();
        return;
    }
    if (!positive_finite(thickness)) throw ValidationError("blade thickness must be positive");
    if (!positive_finite(pendellosung)) throw ValidationError("Pendellosung length must be positive");
    if (!positive_finite(y_per_radian)) throw ValidationError("y scaling must be positive");
    if (!std::isfinite(bragg_angle)) throw ValidationError("Bragg angle must be finite");
}

double DDProfile::pendellosung_phase() const { return kPi * thickness / pendellosung; }

double DDProfile::y(double delta_theta) const { return y_per_radian * delta_theta; }

DDProfile DDProfile::analytic(double thickness, double pendellosung, double bragg_angle, double y_per_radian) {
    DDProfile p;
    p.thickness = thickness;
    p.pendellosung = pendellosung;
    p.bragg_angle = bragg_angle;
    p.y_per_radian = y_per_radian;
    p.validate();
    return p;
}

DDProfile DDProfile::for_reflection(const Reflection& refl, double wavelength, double thickness) {
    const double delta = pendellosung_length(refl, wavelength);
    return analytic(thickness, delta, nisim::bragg_angle(wavelength, refl.d_spacing), delta / refl.d_spacing);
}

DDProfile DDProfile::from_table(BetaTable table) {
    table.validate();
    DDProfile p;
    p.table = std::make_shared<const BetaTable>(std::move(table));
    return p;
}

LaueAmplitudes laue_amplitudes(double delta_theta, const DDProfile& profile) {
    if (profile.tabulated()) throw UnsupportedOperation("tabulated profiles carry beta only");
    if (!std::isfinite(delta_theta)) throw DomainError("delta_theta must be finite");
    const double A = profile.pendellosung_phase();
    const double y = profile.y(delta_theta);
    const double ay = std::abs(y);
    const BraggSide b = bragg_side(ay, A);
    Amplitude t = std::polar(1.0, b.envelope) * b.bracket;
    const double root = std::sqrt(1.0 + y * y);
    // r = i e^{iAy} sin X / sqrt(1+y^2); e^{iAy} = e^{i envelope} e^{iX} for y >= 0.
    Amplitude r = Amplitude(0.0, 1.0) * std::polar(1.0, b.envelope + A * root) * (std::sin(A * root) / root);
    if (y < 0.0) {
        t = std::conj(t);
        r = Amplitude(0.0, 1.0) * std::polar(1.0, -(b.envelope + A * root)) * (std::sin(A * root) / root);
    }
    return {t, r};
}

double dynamical_beta(double delta_theta, const DDProfile& profile) {
    if (!std::isfinite(delta_theta)) throw DomainError("delta_theta must be finite");
    if (profile.tabulated()) return profile.table->lookup(delta_theta);
    const double A = profile.pendellosung_phase();
    const double y = profile.y(delta_theta);
    if (y >= 0.0) return beta_nonnegative(y, A);
    return -beta_nonnegative(-y, A) + 2.0 * beta_nonnegative(0.0, A);
}

void MomentumDistribution::validate() const {
    if (!positive_finite(sigma)) throw ValidationError("Lorentzian width must be positive");
    if (!std::isfinite(center)) throw ValidationError("distribution center must be finite");
}

MomentumDistribution MomentumDistribution::from_width(double width, bool width_is_fwhm, double center) {
    MomentumDistribution d{width_is_fwhm ? 0.5 * width : width, center};
    d.validate();
    return d;
}

double lorentzian_density(double delta_theta, const MomentumDistribution& dist) {
    const double x = delta_theta - dist.center;
    return (dist.sigma / kPi) / (dist.sigma * dist.sigma + x * x);
}

Amplitude coherence_dd(std::span<const PhaseSample> samples) {
    if (samples.empty()) throw ValidationError("empty beta distribution");
    double total = 0.0;
    Amplitude gamma{0.0, 0.0};
    for (const PhaseSample& s : samples) {
        if (!(s.weight >= 0.0) || !std::isfinite(s.weight) || !std::isfinite(s.beta)) {
            throw ValidationError("beta samples need finite beta and non-negative weight");
        }
        total += s.weight;
        gamma += s.weight * std::polar(1.0, 2.0 * s.beta);
    }
    if (std::abs(total - 1.0) > 1e-6) {
        throw ValidationError("beta distribution is not normalized (total weight " + std::to_string(total) + ")");
    }
    return gamma;
}

Amplitude coherence_dd(const std::function<double(double)>& density, double lo, double hi,
                       const QuadratureOptions& opts) {
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError("need lo < hi, both finite");
    const double norm = integrate_real(density, lo, hi, opts);
    if (std::abs(norm - 1.0) > 1e-6) {
        throw ValidationError("beta density is not normalized (integral " + std::to_string(norm) + ")");
    }
    return integrate([&](double b) { return density(b) * std::polar(1.0, 2.0 * b); }, lo, hi, opts).value;
}

DDAverage average_dd(const MomentumDistribution& dist, const DDProfile& profile, PhaseWeight weight,
                     const QuadratureOptions& opts) {
    dist.validate();
    profile.validate();
    const double w = weight == PhaseWeight::Double ? 2.0 : 1.0;
    const double sigma = dist.sigma;
    const double center = dist.center;

    // u = (delta_theta - center) / sigma; g d(delta_theta) = du / (pi (1 + u^2)).
    double u_lo = -kTruncationSigmas;
    double u_hi = kTruncationSigmas;
    if (profile.tabulated()) {
        u_lo = std::max(u_lo, (profile.table->delta_theta.front() - center) / sigma);
        u_hi = std::min(u_hi, (profile.table->delta_theta.back() - center) / sigma);
        if (!(u_hi > u_lo)) throw RangeError("averaging window does not overlap the tabulated range");
    }

    std::vector<double> breaks;
    for (double u : {1.0, 10.0, 100.0, 1e3, 1e4}) {
        breaks.push_back(u);
        breaks.push_back(-u);
    }
    breaks.push_back(0.0);
    if (!profile.tabulated()) {
        // Resolve the total-reflection region, where beta varies fastest.
        for (double y : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0}) {
            for (double sgn : {1.0, -1.0}) {
                breaks.push_back((sgn * y / profile.y_per_radian - center) / sigma);
            }
        }
    }
    std::erase_if(breaks, [&](double u) { return !(u > u_lo && u < u_hi); });
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const auto cauchy = [](double u) { return 1.0 / (kPi * (1.0 + u * u)); };
    const QuadratureResult a = integrate([&](double u) { return Amplitude(cauchy(u), 0.0); }, u_lo, u_hi, opts, breaks);
    const QuadratureResult b = integrate(
        [&](double u) { return cauchy(u) * std::polar(1.0, w * dynamical_beta(center + sigma * u, profile)); }, u_lo,
        u_hi, opts, breaks);

    DDAverage out;
    out.A_O = a.value.real();
    out.B_O = b.value;
    out.contrast = std::min(1.0, std::abs(b.value) / out.A_O);
    out.phase = std::arg(b.value);
    out.truncation_mass = 1.0 - (std::atan(u_hi) - std::atan(u_lo)) / kPi;
    out.error_estimate = a.error_estimate + b.error_estimate;
    out.subdivisions = a.subdivisions + b.subdivisions;
    return out;
}

DDInterferogram averaged_interferogram_dd(std::span<const double> phi_grid, const MomentumDistribution& dist,
                                          const DDProfile& profile, PhaseWeight weight,
                                          const QuadratureOptions& opts) {
    DDInterferogram out;
    out.average = average_dd(dist, profile, weight, opts);
    const double mag = std::abs(out.average.B_O);
    out.phi.assign(phi_grid.begin(), phi_grid.end());
    out.intensity.reserve(phi_grid.size());
    for (double phi : phi_grid) {
        out.intensity.push_back(0.5 * (out.average.A_O - mag * std::cos(phi + out.average.phase)));
    }
    return out;
}

std::vector<MisalignmentPoint> contrast_vs_misalignment(std::span<const double> centers, double sigma,
                                                        const DDProfile& profile, Exec exec,
                                                        const QuadratureOptions& opts) {
    const std::vector<DDAverage> avg =
        exec == Exec::Serial ? kernels::serial::dd_average_batch(centers, sigma, profile, PhaseWeight::Single, opts)
                             : kernels::omp::dd_average_batch(centers, sigma, profile, PhaseWeight::Single, opts);
    std::vector<MisalignmentPoint> out;
    out.reserve(avg.size());
    for (std::size_t i = 0; i < avg.size(); ++i) out.push_back({centers[i], avg[i].contrast, avg[i].phase});
    return out;
}

}  // namespace nisim
