#include "nisim/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "nisim/errors.hpp"
#include "nisim/materials.hpp"

namespace nisim {

namespace {

constexpr double kPi = std::numbers::pi;

const std::map<std::string_view, double>& length_units() {
    static const std::map<std::string_view, double> u = {
        {"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}, {"angstrom", 1e-10},
    };
    return u;
}

const std::map<std::string_view, double>& angle_units() {
    static const std::map<std::string_view, double> u = {
        {"rad", 1.0}, {"mrad", 1e-3}, {"urad", 1e-6}, {"arcsec", kPi / (180.0 * 3600.0)}, {"deg", kPi / 180.0},
    };
    return u;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_number(std::string_view text, std::size_t line, std::string_view key, std::string_view* rest) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || !std::isfinite(value)) {
        throw ParseError(line, "'" + std::string(key) + "': expected a number, got '" + std::string(text) + "'");
    }
    *rest = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
    return value;
}

double parse_plain(std::string_view text, std::size_t line, std::string_view key) {
    std::string_view rest;
    const double v = parse_number(text, line, key, &rest);
    if (!rest.empty()) throw ParseError(line, "'" + std::string(key) + "': unexpected trailing text '" + std::string(rest) + "'");
    return v;
}

double parse_quantity(std::string_view text, std::size_t line, std::string_view key,
                      const std::map<std::string_view, double>& units, std::string_view kind) {
    std::string_view unit;
    const double v = parse_number(text, line, key, &unit);
    if (unit.empty()) return v;
    const auto it = units.find(unit);
    if (it == units.end()) {
        throw ParseError(line, "'" + std::string(key) + "': unknown " + std::string(kind) + " unit '" +
                                   std::string(unit) + "'");
    }
    return v * it->second;
}

std::uint64_t parse_count(std::string_view text, std::size_t line, std::string_view key) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError(line, "'" + std::string(key) + "': expected a non-negative integer, got '" +
                                   std::string(text) + "'");
    }
    return v;
}

bool parse_bool(std::string_view text, std::size_t line, std::string_view key) {
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    throw ParseError(line, "'" + std::string(key) + "': expected true or false");
}

void require_positive(double v, std::size_t line, std::string_view key) {
    if (!(v > 0.0)) throw ParseError(line, "'" + std::string(key) + "' must be positive");
}

void require_non_negative(double v, std::size_t line, std::string_view key) {
    if (v < 0.0) throw ParseError(line, "'" + std::string(key) + "' must be >= 0");
}

std::string reflection_name(std::string_view v, std::size_t line) {
    try {
        return std::string(find_reflection(v).name);
    } catch (const ValidationError& e) {
        throw ParseError(line, e.what());
    }
}

template <class E>
E parse_enum(std::string_view text, std::size_t line, std::string_view key,
             std::initializer_list<std::pair<std::string_view, E>> options) {
    std::string names;
    for (const auto& [name, value] : options) {
        if (text == name) return value;
        names += names.empty() ? std::string(name) : "|" + std::string(name);
    }
    throw ParseError(line, "'" + std::string(key) + "': expected " + names + ", got '" + std::string(text) + "'");
}

std::string_view method_name(CoherenceMethod m) { return to_string(m); }

}  // namespace

PhysicalParams RunConfig::physical() const {
    return PhysicalParams(wavelength, d_spacing ? *d_spacing : find_reflection(reflection).d_spacing, L);
}

DDProfile RunConfig::dd_profile() const {
    const Reflection& refl = find_reflection(dd_reflection);
    const double delta = pendellosung ? *pendellosung : pendellosung_length(refl, dd_wavelength);
    const double scale = dd_y_scale ? *dd_y_scale : delta / refl.d_spacing;
    return DDProfile::analytic(thickness, delta, bragg_angle(dd_wavelength, refl.d_spacing), scale);
}

MomentumDistribution RunConfig::momentum(double center) const {
    return MomentumDistribution::from_width(sigma, width_is_fwhm, center);
}

NoiseModel RunConfig::noise(NoiseAxis axis) const { return {axis, axis == NoiseAxis::Y ? y0 : theta0}; }

CoherenceOptions RunConfig::coherence_options(Exec exec) const {
    CoherenceOptions o;
    o.method = method;
    o.model = phase_model;
    o.tol = quad_tol;
    o.mc_samples = mc_samples;
    o.seed = seed;
    o.exec = exec;
    return o;
}

double RunConfig::omega_scale() const { return omega_unit == OmegaUnit::Hertz ? 2.0 * kPi : 1.0; }

namespace {

void apply(RunConfig& c, std::string_view key, std::string_view value, std::size_t line) {
    if (value.empty()) throw ParseError(line, "'" + std::string(key) + "' has no value");
    const auto length = [&] { return parse_quantity(value, line, key, length_units(), "length"); };
    const auto angle = [&] { return parse_quantity(value, line, key, angle_units(), "angle"); };
    const auto positive = [&](double v) {
        require_positive(v, line, key);
        return v;
    };

    if (key == "wavelength") {
        c.wavelength = positive(length());
    } else if (key == "reflection") {
        c.reflection = reflection_name(value, line);
    } else if (key == "d_spacing") {
        c.d_spacing = positive(length());
    } else if (key == "L") {
        c.L = positive(length());
    } else if (key == "y0") {
        c.y0 = length();
        require_non_negative(c.y0, line, key);
    } else if (key == "theta0") {
        c.theta0 = angle();
        require_non_negative(c.theta0, line, key);
    } else if (key == "dd_wavelength") {
        c.dd_wavelength = positive(length());
    } else if (key == "dd_reflection") {
        c.dd_reflection = reflection_name(value, line);
    } else if (key == "thickness") {
        c.thickness = positive(length());
    } else if (key == "pendellosung") {
        c.pendellosung = positive(length());
    } else if (key == "dd_y_scale") {
        c.dd_y_scale = positive(parse_plain(value, line, key));
    } else if (key == "sigma") {
        c.sigma = positive(angle());
    } else if (key == "width_is_fwhm") {
        c.width_is_fwhm = parse_bool(value, line, key);
    } else if (key == "quad_tol") {
        c.quad_tol = positive(parse_plain(value, line, key));
    } else if (key == "mc_samples") {
        c.mc_samples = parse_count(value, line, key);
        if (c.mc_samples < 1000) throw ParseError(line, "'mc_samples' must be >= 1000");
    } else if (key == "seed") {
        c.seed = parse_count(value, line, key);
    } else if (key == "omega_unit") {
        c.omega_unit =
            parse_enum<OmegaUnit>(value, line, key, {{"rad_s", OmegaUnit::RadPerSecond}, {"hz", OmegaUnit::Hertz}});
    } else if (key == "method") {
        c.method = parse_enum<CoherenceMethod>(value, line, key,
                                               {{"closed_form", CoherenceMethod::ClosedForm},
                                                {"quadrature", CoherenceMethod::Quadrature},
                                                {"monte_carlo", CoherenceMethod::MonteCarlo}});
    } else if (key == "phase_model") {
        c.phase_model = parse_enum<PhaseModel>(value, line, key,
                                               {{"lowfreq", PhaseModel::LowFrequency}, {"exact", PhaseModel::Exact}});
    } else if (key == "format") {
        c.format =
            parse_enum<OutputFormat>(value, line, key, {{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}});
    } else if (key == "output") {
        c.output = std::string(value);
    } else {
        throw ParseError(line, "unknown key '" + std::string(key) + "'");
    }
}

void check_bragg(const RunConfig& c, std::size_t line, std::size_t dd_line) {
    const double d = c.d_spacing ? *c.d_spacing : find_reflection(c.reflection).d_spacing;
    if (c.wavelength / (2.0 * d) >= 1.0) {
        throw ParseError(line, "Bragg condition unsatisfiable: lambda/2d = " + fmt(c.wavelength / (2.0 * d)) + " >= 1");
    }
    const double dd_d = find_reflection(c.dd_reflection).d_spacing;
    if (c.dd_wavelength / (2.0 * dd_d) >= 1.0) {
        throw ParseError(dd_line, "Bragg condition unsatisfiable: lambda/2d = " +
                                      fmt(c.dd_wavelength / (2.0 * dd_d)) + " >= 1");
    }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig c;
    std::map<std::string, std::size_t, std::less<>> seen;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(lineno, "expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        if (seen.contains(key)) throw ParseError(lineno, "duplicate key '" + std::string(key) + "'");
        apply(c, key, trim(line.substr(eq + 1)), lineno);
        seen.emplace(std::string(key), lineno);
    }

    const auto last_line = [&](std::initializer_list<std::string_view> keys) {
        std::size_t n = 0;
        for (std::string_view k : keys) {
            if (auto it = seen.find(k); it != seen.end()) n = std::max(n, it->second);
        }
        return n;
    };
    check_bragg(c, last_line({"wavelength", "reflection", "d_spacing"}), last_line({"dd_wavelength", "dd_reflection"}));
    return c;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
    RunConfig updated = config;
    apply(updated, trim(key), trim(value), 0);
    check_bragg(updated, 0, 0);
    config = std::move(updated);
}

double parse_length(std::string_view text) {
    return parse_quantity(trim(text), 0, "length", length_units(), "length");
}

double parse_angle(std::string_view text) { return parse_quantity(trim(text), 0, "angle", angle_units(), "angle"); }

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c) {
    std::vector<std::pair<std::string, std::string>> kv = {
        {"wavelength", fmt(c.wavelength) + " m"},
        {"reflection", c.reflection},
    };
    if (c.d_spacing) kv.emplace_back("d_spacing", fmt(*c.d_spacing) + " m");
    kv.emplace_back("L", fmt(c.L) + " m");
    kv.emplace_back("y0", fmt(c.y0) + " m");
    kv.emplace_back("theta0", fmt(c.theta0) + " rad");
    kv.emplace_back("dd_wavelength", fmt(c.dd_wavelength) + " m");
    kv.emplace_back("dd_reflection", c.dd_reflection);
    kv.emplace_back("thickness", fmt(c.thickness) + " m");
    if (c.pendellosung) kv.emplace_back("pendellosung", fmt(*c.pendellosung) + " m");
    if (c.dd_y_scale) kv.emplace_back("dd_y_scale", fmt(*c.dd_y_scale));
    kv.emplace_back("sigma", fmt(c.sigma) + " rad");
    kv.emplace_back("width_is_fwhm", c.width_is_fwhm ? "true" : "false");
    kv.emplace_back("quad_tol", fmt(c.quad_tol));
    kv.emplace_back("mc_samples", std::to_string(c.mc_samples));
    kv.emplace_back("seed", std::to_string(c.seed));
    kv.emplace_back("omega_unit", c.omega_unit == OmegaUnit::Hertz ? "hz" : "rad_s");
    kv.emplace_back("method", std::string(method_name(c.method)));
    kv.emplace_back("phase_model", c.phase_model == PhaseModel::Exact ? "exact" : "lowfreq");
    kv.emplace_back("format", c.format == OutputFormat::Json ? "json" : "csv");
    if (!c.output.empty()) kv.emplace_back("output", c.output);
    return kv;
}

std::string emit(const RunConfig& c) {
    std::string out;
    for (const auto& [k, v] : describe(c)) out += k + " = " + v + "\n";
    return out;
}

}  // namespace nisim
