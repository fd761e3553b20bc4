#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "nisim/exec.hpp"
#include "nisim/geometry.hpp"
#include "nisim/su2.hpp"

namespace nisim {

namespace constants {
// CODATA 2018
inline constexpr double kNeutronMass = 1.67492749804e-27;  // kg
inline constexpr double kHbar = 1.054571817e-34;           // J s
inline constexpr double kPlanck = 6.62607015e-34;          // J s
}  // namespace constants

/// Neutron kinematics inside the interferometer. Derived quantities are
/// computed on demand from the stored inputs.
class PhysicalParams {
public:
    PhysicalParams(double wavelength, double d_spacing, double L, double mass = constants::kNeutronMass,
                   double hbar = constants::kHbar, double planck = constants::kPlanck);

    /// L = 5 cm, lambda = 4.4 A on Si(111).
    static PhysicalParams defaults();

    double wavelength() const { return wavelength_; }
    double d_spacing() const { return d_spacing_; }
    double L() const { return L_; }
    double mass() const { return mass_; }
    double hbar() const { return hbar_; }

    double speed() const;        ///< h / (m lambda)
    double bragg_angle() const;  ///< arcsin(lambda / 2d)
    double v_parallel() const;   ///< v sin(theta_B), along the reciprocal lattice vector
    double v_perp() const;       ///< v cos(theta_B)
    double tau() const;          ///< L / v_perp

private:
    double wavelength_;
    double d_spacing_;
    double L_;
    double mass_;
    double hbar_;
    double planck_;
};

enum class NoiseAxis { Y, Z };
std::string_view to_string(NoiseAxis axis);

/// zeta(t) = amplitude sin(omega t + varphi); amplitude is y0 [m] for Y and
/// theta0 [rad] for Z, omega in rad/s.
struct NoiseSpec {
    NoiseAxis axis = NoiseAxis::Y;
    double amplitude = 0.0;
    double omega = 0.0;
    double varphi = 0.0;

    void validate() const;
};

/// First three time derivatives of the displacement: (u, u', u'') for Y,
/// (theta', theta'', theta''') for Z.
struct NoiseKinematics {
    double first;
    double second;
    double third;
};

NoiseKinematics noise_kinematics(const NoiseSpec& spec, double t);

/// Loop phase differences at entry time t = 0. The three-blade geometry has a
/// single loop, so only `total_sym` is set.
struct LoopPhases {
    std::optional<double> dPhi1;
    std::optional<double> dPhi2;
    std::optional<double> dPhi2_anti;
    double total_sym = 0.0;
    std::optional<double> total_anti;
};

LoopPhases loop_phases_exact(GeometryKind kind, const NoiseSpec& spec, const PhysicalParams& params);

struct LowFrequencyPhases {
    double total_sym;
    std::optional<double> total_anti;
};

LowFrequencyPhases loop_phase_lowfreq(GeometryKind kind, const NoiseSpec& spec, const PhysicalParams& params);

/// Five-blade trajectory classes; the other geometries only have Symmetric.
enum class Branch { Symmetric, Antisymmetric };

/// Low-frequency phase law  dPhi(varphi) = prefactor * omega^power * trig(varphi).
/// |prefactor| is the Omega of the Bessel argument J0(Omega omega^power).
struct LowFrequencyLaw {
    enum class Trig { Sin, Cos };
    double prefactor;
    int power;
    Trig trig;

    double operator()(double omega, double varphi) const;
};

LowFrequencyLaw lowfreq_law(GeometryKind kind, NoiseAxis axis, Branch branch, const PhysicalParams& params,
                            double amplitude);

enum class CoherenceMethod { ClosedForm, Quadrature, MonteCarlo };
std::string_view to_string(CoherenceMethod method);

struct CoherenceResult {
    Amplitude gamma{1.0};
    CoherenceMethod method = CoherenceMethod::ClosedForm;
    double std_error_re = 0.0;
    double std_error_im = 0.0;
    double std_error = 0.0;  ///< hypot of the component standard errors
    std::size_t samples = 0;
    double error_estimate = 0.0;
};

struct BranchCoherence {
    CoherenceResult symmetric;
    std::optional<CoherenceResult> antisymmetric;  ///< five-blade only
};

/// gamma = J0(Omega omega^power) from the low-frequency laws.
BranchCoherence coherence_closed_form(GeometryKind kind, NoiseAxis axis, double omega,
                                      const PhysicalParams& params, double amplitude);

using PhaseFunction = std::function<double(double)>;

/// (1/2pi) \int_0^{2pi} exp(i dPhi(varphi)) d varphi by adaptive Gauss-Kronrod.
CoherenceResult coherence_quadrature(const PhaseFunction& phase, double tol = 1e-9);

/// Mean of exp(i dPhi) over n uniform arrival phases. Deterministic for a given
/// seed regardless of Exec or thread count. Requires n >= 1000.
CoherenceResult coherence_montecarlo(const PhaseFunction& phase, std::size_t n, std::uint64_t seed,
                                     Exec exec = Exec::Parallel);

enum class PhaseModel { LowFrequency, Exact };

/// varphi -> loop phase for one geometry/branch.
PhaseFunction loop_phase_function(GeometryKind kind, NoiseAxis axis, Branch branch, double omega,
                                  double amplitude, const PhysicalParams& params,
                                  PhaseModel model = PhaseModel::LowFrequency);

}  // namespace nisim
