#include "nisim/geometry.hpp"

#include <cmath>
#include <numbers>

#include "nisim/errors.hpp"

namespace nisim {

namespace {

constexpr double kPi = std::numbers::pi;

enum class StageKind { Splitter, Mirror, Flag };

struct Stage {
    StageKind kind;
    int blade;     // -1 for flags
    double phase;  // flags only
};

// Time-ordered stage layout shared by the matrix and path-sum routes.
std::vector<Stage> stages(const InterferometerSpec& spec) {
    switch (spec.kind) {
        case GeometryKind::ThreeBlade:
            return {{StageKind::Splitter, 0, 0}, {StageKind::Flag, -1, spec.phi},
                    {StageKind::Mirror, 1, 0}, {StageKind::Splitter, 2, 0}};
        case GeometryKind::FourBlade:
            return {{StageKind::Splitter, 0, 0}, {StageKind::Flag, -1, spec.phi},
                    {StageKind::Mirror, 1, 0}, {StageKind::Mirror, 2, 0},
                    {StageKind::Splitter, 3, 0}};
        case GeometryKind::FiveBlade:
            return {{StageKind::Splitter, 0, 0}, {StageKind::Flag, -1, spec.phi},
                    {StageKind::Mirror, 1, 0},   {StageKind::Splitter, 2, 0},
                    {StageKind::Mirror, 3, 0},   {StageKind::Flag, -1, spec.chi},
                    {StageKind::Splitter, 4, 0}};
    }
    throw UsageError("unknown geometry");
}

struct Partial {
    std::vector<PathStep> steps;
    Amplitude amplitude;
    int path;
};

}  // namespace

int blade_count(GeometryKind kind) {
    switch (kind) {
        case GeometryKind::ThreeBlade: return 3;
        case GeometryKind::FourBlade: return 4;
        case GeometryKind::FiveBlade: return 5;
    }
    return 0;
}

std::string_view to_string(GeometryKind kind) {
    switch (kind) {
        case GeometryKind::ThreeBlade: return "three-blade";
        case GeometryKind::FourBlade: return "four-blade";
        case GeometryKind::FiveBlade: return "five-blade";
    }
    return "?";
}

void InterferometerSpec::validate() const {
    blade.validate();
    if (!std::isfinite(phi) || !std::isfinite(chi)) {
        throw DomainError("phase flags must be finite");
    }
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw DomainError("blade separation L must be positive");
    }
}

std::vector<Operator2> operator_sequence(const InterferometerSpec& spec) {
    spec.validate();
    const Operator2 splitter = blade_operator(spec.blade);
    const Operator2 mirror = rot_x(kPi);
    std::vector<Operator2> seq;
    for (const Stage& s : stages(spec)) {
        switch (s.kind) {
            case StageKind::Splitter: seq.push_back(splitter); break;
            case StageKind::Mirror: seq.push_back(mirror); break;
            case StageKind::Flag: seq.push_back(rot_z(s.phase)); break;
        }
    }
    return seq;
}

Operator2 assemble(const InterferometerSpec& spec) { return compose(operator_sequence(spec)); }

DetectorIntensities intensities(const Operator2& op, const PathState& input) {
    const PathState out = op.apply(input);
    return {std::norm(out.amplitude_I()), std::norm(out.amplitude_II())};
}

DetectorIntensities closed_form_intensity(GeometryKind kind, double phi, double chi, double beta) {
    double o = 0.0;
    switch (kind) {
        case GeometryKind::ThreeBlade:
            o = 0.5 * (1.0 + std::cos(phi));
            return {o, 0.5 * (1.0 - std::cos(phi))};
        case GeometryKind::FourBlade:
            o = 0.5 * (1.0 - std::cos(phi + 2.0 * beta));
            return {o, 0.5 * (1.0 + std::cos(phi + 2.0 * beta))};
        case GeometryKind::FiveBlade:
            return {0.25 * (2.0 + std::cos(chi - phi) - std::cos(chi + phi)),
                    0.25 * (2.0 - std::cos(chi - phi) + std::cos(chi + phi))};
    }
    throw UsageError("unknown geometry");
}

std::vector<BeamPath> enumerate_paths(const InterferometerSpec& spec, MirrorModel mirrors) {
    spec.validate();
    const double c = spec.blade.transmission();
    const double s = spec.blade.reflection();
    const Amplitude t = std::polar(c, spec.blade.beta);
    const Amplitude r{0.0, s};
    const Amplitude t_bar = std::conj(t);
    const Amplitude r_bar = -std::conj(r);

    // Physical redirecting blades are 50:50 with the same dynamical phase.
    const double m = std::sqrt(0.5);
    const Amplitude mt = std::polar(m, spec.blade.beta);
    const Amplitude mr{0.0, m};

    std::vector<BeamPath> done;
    std::vector<Partial> live{{{}, Amplitude{1.0}, 0}};

    for (const Stage& st : stages(spec)) {
        std::vector<Partial> next;
        for (Partial& p : live) {
            if (st.kind == StageKind::Flag) {
                p.amplitude *= std::polar(1.0, p.path == 0 ? 0.5 * st.phase : -0.5 * st.phase);
                next.push_back(std::move(p));
                continue;
            }
            const int other = 1 - p.path;
            Amplitude trans;
            Amplitude refl;
            if (st.kind == StageKind::Splitter) {
                trans = p.path == 0 ? t : t_bar;
                refl = p.path == 0 ? r : r_bar;
            } else if (mirrors == MirrorModel::Ideal) {
                trans = 0.0;
                refl = Amplitude{0.0, 1.0};
            } else {
                trans = p.path == 0 ? mt : std::conj(mt);
                refl = p.path == 0 ? mr : -std::conj(mr);
            }

            Partial reflected = p;
            reflected.steps.push_back({st.blade, BladeEvent::Reflect, p.path, other});
            reflected.amplitude *= refl;
            reflected.path = other;

            if (st.kind == StageKind::Splitter) {
                Partial transmitted = p;
                transmitted.steps.push_back({st.blade, BladeEvent::Transmit, p.path, p.path});
                transmitted.amplitude *= trans;
                next.push_back(std::move(transmitted));
            } else if (mirrors == MirrorModel::Physical) {
                BeamPath lost{p.steps, p.amplitude * trans, ExitPort::Loss};
                lost.steps.push_back({st.blade, BladeEvent::Transmit, p.path, p.path});
                done.push_back(std::move(lost));
            }
            next.push_back(std::move(reflected));
        }
        live = std::move(next);
    }

    for (Partial& p : live) {
        done.push_back({std::move(p.steps), p.amplitude, p.path == 0 ? ExitPort::O : ExitPort::H});
    }
    return done;
}

DetectorIntensities path_sum_intensities(const std::vector<BeamPath>& paths) {
    Amplitude o{};
    Amplitude h{};
    for (const BeamPath& p : paths) {
        if (p.port == ExitPort::O) o += p.amplitude;
        if (p.port == ExitPort::H) h += p.amplitude;
    }
    return {std::norm(o), std::norm(h)};
}

std::vector<TrajectoryClass> trajectory_classes(GeometryKind kind, const std::vector<BeamPath>& paths) {
    std::vector<TrajectoryClass> out;
    for (const BeamPath& p : paths) {
        if (p.port == ExitPort::Loss || p.steps.empty()) continue;
        std::vector<PathStep> prefix(p.steps.begin(), p.steps.end() - 1);
        bool seen = false;
        for (const auto& cls : out) {
            if (cls.steps.size() != prefix.size()) continue;
            bool same = true;
            for (std::size_t i = 0; i < prefix.size() && same; ++i) {
                same = cls.steps[i].blade == prefix[i].blade && cls.steps[i].event == prefix[i].event &&
                       cls.steps[i].path_before == prefix[i].path_before;
            }
            if (same) {
                seen = true;
                break;
            }
        }
        if (seen) continue;
        bool symmetric = true;
        if (kind == GeometryKind::FiveBlade) {
            for (const auto& step : prefix) {
                if (step.blade == 2) symmetric = step.event == BladeEvent::Transmit;
            }
        }
        out.push_back({std::move(prefix), symmetric});
    }
    return out;
}

double throughput(const InterferometerSpec& spec, bool physical_mirrors) {
    if (physical_mirrors && std::abs(spec.blade.alpha - kPi / 2) > 1e-12) {
        throw UsageError("physical-mirror throughput assumes 50:50 blades (alpha = pi/2)");
    }
    const auto paths = enumerate_paths(spec, physical_mirrors ? MirrorModel::Physical : MirrorModel::Ideal);
    const DetectorIntensities d = path_sum_intensities(paths);
    return d.O + d.H;
}

}  // namespace nisim
