#pragma once

#include <string_view>
#include <vector>

#include "nisim/su2.hpp"

namespace nisim {

enum class GeometryKind { ThreeBlade, FourBlade, FiveBlade };

inline constexpr GeometryKind kAllGeometries[] = {GeometryKind::ThreeBlade, GeometryKind::FourBlade,
                                                  GeometryKind::FiveBlade};

int blade_count(GeometryKind kind);
std::string_view to_string(GeometryKind kind);

struct InterferometerSpec {
    GeometryKind kind = GeometryKind::ThreeBlade;
    BladeParams blade = BladeParams::balanced();
    double phi = 0.0;   ///< loop-1 phase flag
    double chi = 0.0;   ///< loop-2 phase flag, five-blade only
    double L = 0.05;    ///< blade separation unit [m]

    void validate() const;
};

/// How the redirecting blades are modelled.
enum class MirrorModel {
    Ideal,     ///< post-selected pi pulse R_x(pi)
    Physical,  ///< 50:50 blade; the transmitted branch leaves the interferometer
};

enum class ExitPort { O, H, Loss };

struct DetectorIntensities {
    double O;
    double H;
};

/// Time-ordered operator sequence (first element acts first).
std::vector<Operator2> operator_sequence(const InterferometerSpec& spec);

/// Interferometer operator with ideal mirrors.
///   three: U_B U_M R_z(phi) U_B
///   four:  U_B R_x(pi) R_x(pi) R_z(phi) U_B
///   five:  U_B R_z(chi) R_x(pi) U_B R_x(pi) R_z(phi) U_B
Operator2 assemble(const InterferometerSpec& spec);

/// I_O = |<I|op|psi>|^2, I_H = |<II|op|psi>|^2.
DetectorIntensities intensities(const Operator2& op, const PathState& input);

/// Printed alpha = pi/2 intensity formulas for an |I> input.
DetectorIntensities closed_form_intensity(GeometryKind kind, double phi, double chi, double beta);

enum class BladeEvent { Transmit, Reflect };

struct PathStep {
    int blade;         ///< 0-based blade index
    BladeEvent event;
    int path_before;   ///< 0 = I, 1 = II
    int path_after;
};

struct BeamPath {
    std::vector<PathStep> steps;
    Amplitude amplitude;
    ExitPort port;
};

/// Every classical trajectory through the blades for an |I> input, with its
/// product amplitude built from t, r, t-bar = t*, r-bar = -r*.
std::vector<BeamPath> enumerate_paths(const InterferometerSpec& spec,
                                      MirrorModel mirrors = MirrorModel::Ideal);

/// Port intensities from coherent summation of enumerated amplitudes.
DetectorIntensities path_sum_intensities(const std::vector<BeamPath>& paths);

/// A trajectory up to (but excluding) the last blade. For the five-blade
/// geometry `symmetric` says whether the middle blade transmitted.
struct TrajectoryClass {
    std::vector<PathStep> steps;
    bool symmetric;
};

std::vector<TrajectoryClass> trajectory_classes(GeometryKind kind, const std::vector<BeamPath>& paths);

/// Fraction of the incident beam reaching either detector. Physical mirrors
/// require alpha = pi/2.
double throughput(const InterferometerSpec& spec, bool physical_mirrors);

}  // namespace nisim
