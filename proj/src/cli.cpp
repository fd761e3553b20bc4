#include "nisim/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "nisim/acceptance.hpp"
#include "nisim/analysis.hpp"
#include "nisim/config.hpp"
#include "nisim/dyndiff.hpp"
#include "nisim/errors.hpp"
#include "nisim/exec.hpp"
#include "nisim/io.hpp"

namespace nisim::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

double to_number(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ValidationError("not a number: '" + s + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    return parts;
}

GeometryKind parse_kind(const std::string& s) {
    if (s == "3" || s == "three") return GeometryKind::ThreeBlade;
    if (s == "4" || s == "four") return GeometryKind::FourBlade;
    if (s == "5" || s == "five") return GeometryKind::FiveBlade;
    throw ValidationError("unknown geometry '" + s + "' (use 3, 4 or 5)");
}

std::vector<GeometryKind> parse_kinds(const std::string& s) {
    if (s == "all") return {std::begin(kAllGeometries), std::end(kAllGeometries)};
    std::vector<GeometryKind> kinds;
    for (const std::string& part : split(s, ',')) kinds.push_back(parse_kind(part));
    return kinds;
}

NoiseAxis parse_axis(const std::string& s) {
    if (s == "y" || s == "Y") return NoiseAxis::Y;
    if (s == "z" || s == "Z") return NoiseAxis::Z;
    throw ValidationError("unknown noise axis '" + s + "' (use y or z)");
}

std::vector<double> phase_grid(std::size_t points) {
    if (points < 2) throw ValidationError("--points must be at least 2");
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) g[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(points);
    return g;
}

std::string num(double x) { return format_double(x); }

Metadata header(const std::string& command, const RunConfig& cfg) {
    Metadata m = {{"generator", std::string("nisim ") + kVersion}, {"command", command}};
    for (const auto& [k, v] : describe(cfg)) m.emplace_back("config." + k, v);
    m.emplace_back("omega_column_unit", "rad/s");
    return m;
}

void emit_table(const Table& t, const RunConfig& cfg, std::ostream& out) {
    if (cfg.output.empty()) {
        cfg.format == OutputFormat::Json ? write_json(out, t) : write_csv(out, t);
        return;
    }
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) throw ValidationError("cannot write '" + cfg.output + "'");
    cfg.format == OutputFormat::Json ? write_json(file, t) : write_csv(file, t);
    if (!file) throw ValidationError("failed writing '" + cfg.output + "'");
}

struct Options {
    std::string config_path;
    std::string output;
    std::string format;
    int threads = 0;
    bool hz = false;
    std::optional<std::uint64_t> seed;
    std::string method;
    std::string phase_model;
    std::vector<std::string> settings;

    std::string geometry;
    std::string axis = "y";
    std::string omega;
    std::size_t grid_n = 64;
    std::string port = "O";
    std::size_t points = 361;
    std::string chi = "1.5707963267948966";
    std::string mu = "3.141592653589793";
    std::string range = "-50:1:50";
    std::string table;
    std::string thickness;
    std::string lambda;
    std::string sigma;
    std::string center = "0";
    std::string measured;
    std::string simulated;
    std::string sim_x;
    std::string sim_y;
    std::string only;
};

RunConfig resolve_config(const Options& o) {
    RunConfig cfg;
    std::string path = o.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv(kConfigEnvVar); env != nullptr) path = env;
    }
    if (!path.empty()) cfg = load_config(path);
    for (const std::string& s : o.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + s + "'");
        apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!o.output.empty()) apply_setting(cfg, "output", o.output);
    if (!o.format.empty()) apply_setting(cfg, "format", o.format);
    if (!o.method.empty()) apply_setting(cfg, "method", o.method);
    if (!o.phase_model.empty()) apply_setting(cfg, "phase_model", o.phase_model);
    if (o.seed) cfg.seed = *o.seed;
    if (o.hz) cfg.omega_unit = OmegaUnit::Hertz;
    return cfg;
}

std::vector<double> omega_values(const std::string& text, const RunConfig& cfg) {
    std::vector<double> w = parse_grid(text);
    for (double& x : w) {
        x *= cfg.omega_scale();
        if (x < 0.0) throw ValidationError("omega must be >= 0");
    }
    return w;
}

Table cmd_sweep(const Options& o, const RunConfig& cfg) {
    const std::vector<GeometryKind> kinds = parse_kinds(o.geometry.empty() ? "all" : o.geometry);
    const NoiseAxis axis = parse_axis(o.axis);
    const std::vector<double> omega = omega_values(o.omega.empty() ? "0:1:400" : o.omega, cfg);
    const SweepCurve s = coherence_sweep(kinds, cfg.noise(axis), omega, cfg.physical(), cfg.coherence_options());

    Table t;
    t.metadata = header("sweep", cfg);
    t.metadata.emplace_back("axis", std::string(to_string(axis)));
    t.metadata.emplace_back("five_blade_branch", "symmetric");
    t.columns = {"omega"};
    for (GeometryKind k : kinds) t.columns.push_back("gamma_abs_" + std::to_string(blade_count(k)));
    for (std::size_t i = 0; i < omega.size(); ++i) {
        std::vector<double> row = {omega[i]};
        for (std::size_t k = 0; k < kinds.size(); ++k) row.push_back(s.gamma_abs[k][i]);
        t.add_row(std::move(row));
    }
    return t;
}

Table cmd_densitymap(const Options& o, const RunConfig& cfg) {
    const NoiseAxis axis = parse_axis(o.axis);
    const double omega = to_number(o.omega.empty() ? "0" : o.omega) * cfg.omega_scale();
    const DensityMap m = density_map(omega, o.grid_n, cfg.noise(axis), cfg.physical(), cfg.coherence_options());

    Table t;
    t.metadata = header("densitymap", cfg);
    t.metadata.emplace_back("axis", std::string(to_string(axis)));
    t.metadata.emplace_back("omega", num(omega));
    t.metadata.emplace_back("gamma", num(m.gamma.real()) + " " + num(m.gamma.imag()));
    t.metadata.emplace_back("gamma_prime", num(m.gamma_prime.real()) + " " + num(m.gamma_prime.imag()));
    t.columns = {"phi", "chi", "intensity_H"};
    for (std::size_t i = 0; i < m.phi_grid.size(); ++i) {
        for (std::size_t j = 0; j < m.chi_grid.size(); ++j) t.add_row({m.phi_grid[i], m.chi_grid[j], m.at(i, j)});
    }
    return t;
}

Table cmd_interferogram(const Options& o, const RunConfig& cfg) {
    const GeometryKind kind = parse_kind(o.geometry.empty() ? "3" : o.geometry);
    const NoiseAxis axis = parse_axis(o.axis);
    const double omega = to_number(o.omega.empty() ? "0" : o.omega) * cfg.omega_scale();
    ExitPort port = ExitPort::O;
    if (o.port == "H" || o.port == "h") {
        port = ExitPort::H;
    } else if (o.port != "O" && o.port != "o") {
        throw ValidationError("--port must be O or H");
    }
    const double chi = parse_angle(o.chi);
    const Interferogram c = averaged_interferogram(kind, cfg.noise(axis), omega, cfg.physical(), port,
                                                   phase_grid(o.points), chi, cfg.coherence_options());

    Table t;
    t.metadata = header("interferogram", cfg);
    t.metadata.emplace_back("geometry", std::string(to_string(kind)));
    t.metadata.emplace_back("axis", std::string(to_string(axis)));
    t.metadata.emplace_back("port", port == ExitPort::O ? "O" : "H");
    t.metadata.emplace_back("omega", num(omega));
    if (kind == GeometryKind::FiveBlade) t.metadata.emplace_back("chi", num(chi));
    t.metadata.emplace_back("gamma_abs", num(std::abs(c.gamma)));
    t.metadata.emplace_back("gamma_arg", num(std::arg(c.gamma)));
    if (c.gamma_prime) t.metadata.emplace_back("gamma_prime_abs", num(std::abs(*c.gamma_prime)));
    t.metadata.emplace_back("contrast", num(contrast(c)));
    t.columns = {"phi", "intensity"};
    for (std::size_t i = 0; i < c.phase_grid.size(); ++i) t.add_row({c.phase_grid[i], c.intensity[i]});
    return t;
}

Table cmd_refocus(const Options& o, const RunConfig& cfg) {
    const NoiseAxis axis = parse_axis(o.axis);
    const std::vector<double> omega = omega_values(o.omega.empty() ? "0,100,150,200" : o.omega, cfg);
    const double mu = parse_angle(o.mu);
    const std::vector<double> phi = phase_grid(o.points);

    Table t;
    t.metadata = header("refocus", cfg);
    t.metadata.emplace_back("axis", std::string(to_string(axis)));
    t.metadata.emplace_back("mu", num(mu));
    t.columns = {"omega", "phi", "chi", "intensity_H"};
    for (double w : omega) {
        const RefocusedInterferogram r =
            refocused_interferogram(phi, cfg.noise(axis), w, cfg.physical(), mu, cfg.coherence_options());
        const std::string tag = "[omega=" + num(w) + "]";
        t.metadata.emplace_back("dc_offset" + tag, num(r.dc_offset));
        t.metadata.emplace_back("modulation_depth" + tag, num(r.modulation_depth));
        t.metadata.emplace_back("relative_contrast" + tag, num(r.relative_contrast));
        for (std::size_t i = 0; i < phi.size(); ++i) t.add_row({w, phi[i], mu - phi[i], r.curve.intensity[i]});
    }
    return t;
}

RunConfig with_dd_overrides(const Options& o, RunConfig cfg) {
    if (!o.thickness.empty()) apply_setting(cfg, "thickness", o.thickness);
    if (!o.lambda.empty()) apply_setting(cfg, "dd_wavelength", o.lambda);
    if (!o.sigma.empty()) apply_setting(cfg, "sigma", o.sigma);
    return cfg;
}

void dd_metadata(Table& t, const DDProfile& p, const MomentumDistribution& dist) {
    if (p.tabulated()) {
        t.metadata.emplace_back("profile", "tabulated");
    } else {
        t.metadata.emplace_back("profile", "analytic");
        t.metadata.emplace_back("pendellosung_phase_A", num(p.pendellosung_phase()));
        t.metadata.emplace_back("y_per_radian", num(p.y_per_radian));
    }
    t.metadata.emplace_back("sigma", num(dist.sigma));
    t.metadata.emplace_back("truncation_sigmas", num(kTruncationSigmas));
}

Table cmd_ddscan(const Options& o, const RunConfig& base) {
    const RunConfig cfg = with_dd_overrides(o, base);
    const DDProfile profile = o.table.empty() ? cfg.dd_profile() : DDProfile::from_table(read_beta_table(o.table));
    const MomentumDistribution dist = cfg.momentum();
    std::vector<double> centers = parse_grid(o.range);
    for (double& c : centers) c *= 1e-6;
    QuadratureOptions q;
    q.abs_tol = cfg.quad_tol;
    const std::vector<MisalignmentPoint> pts = contrast_vs_misalignment(centers, dist.sigma, profile, Exec::Parallel, q);

    Table t;
    t.metadata = header("ddscan", cfg);
    dd_metadata(t, profile, dist);
    t.metadata.emplace_back("weight", "single");
    t.columns = {"delta_theta_urad", "contrast", "phase", "beta"};
    for (const MisalignmentPoint& p : pts) {
        t.add_row({p.center * 1e6, p.contrast, p.phase, dynamical_beta(p.center, profile)});
    }
    return t;
}

Table cmd_ddcontrast(const Options& o, const RunConfig& base) {
    PhaseWeight weight = PhaseWeight::Double;
    if (o.geometry == "1" || o.geometry == "extra") {
        weight = PhaseWeight::Single;
    } else if (!o.geometry.empty() && o.geometry != "4") {
        throw UsageError("the dynamical phase cancels in the three- and five-blade geometries; use --geometry 4 "
                         "or --geometry extra");
    }
    const RunConfig cfg = with_dd_overrides(o, base);
    const DDProfile profile = o.table.empty() ? cfg.dd_profile() : DDProfile::from_table(read_beta_table(o.table));
    const MomentumDistribution dist = cfg.momentum(parse_angle(o.center));
    QuadratureOptions q;
    q.abs_tol = cfg.quad_tol;
    const DDAverage a = average_dd(dist, profile, weight, q);

    Table t;
    t.metadata = header("ddcontrast", cfg);
    dd_metadata(t, profile, dist);
    t.metadata.emplace_back("weight", weight == PhaseWeight::Double ? "double" : "single");
    t.columns = {"center", "contrast", "phase", "A_O", "B_O_abs", "truncation_mass", "error_estimate"};
    t.add_row({dist.center, a.contrast, a.phase, a.A_O, std::abs(a.B_O), a.truncation_mass, a.error_estimate});
    return t;
}

Table cmd_compare(const Options& o, const RunConfig& cfg) {
    const MeasuredSeries m = read_measured(o.measured);
    std::ifstream in(o.simulated);
    if (!in) throw ValidationError("cannot open simulated data '" + o.simulated + "'");
    const Table sim = read_csv(in);
    const auto column = [&](const std::string& name, std::size_t fallback) {
        if (name.empty()) {
            if (fallback >= sim.columns.size()) throw ValidationError("simulated file has too few columns");
            return fallback;
        }
        for (std::size_t i = 0; i < sim.columns.size(); ++i) {
            if (sim.columns[i] == name) return i;
        }
        throw ValidationError("simulated file has no column '" + name + "'");
    };
    const std::size_t cx = column(o.sim_x, 0);
    const std::size_t cy = column(o.sim_y, 1);
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& row : sim.rows) {
        x.push_back(row[cx]);
        y.push_back(row[cy]);
    }
    const ComparisonReport r = compare(m, x, y);

    Table t;
    t.metadata = header("compare", cfg);
    t.metadata.emplace_back("measured", o.measured);
    t.metadata.emplace_back("simulated", o.simulated);
    t.metadata.emplace_back("points", std::to_string(r.x.size()));
    t.metadata.emplace_back("rms", num(r.rms));
    t.metadata.emplace_back("max_abs_residual", num(r.max_abs));
    t.columns = {"x", "measured", "simulated", "residual"};
    for (std::size_t i = 0; i < r.x.size(); ++i) t.add_row({r.x[i], r.measured[i], r.simulated[i], r.residual[i]});
    return t;
}

int cmd_selftest(const Options& o, std::ostream& out) {
    std::vector<int> ids;
    if (!o.only.empty()) {
        for (const std::string& s : split(o.only, ',')) ids.push_back(static_cast<int>(to_number(s)));
    }
    const std::vector<acceptance::Result> results = acceptance::run_all(ids);
    acceptance::print(out, results);
    std::size_t passed = 0;
    for (const auto& r : results) passed += r.pass ? 1 : 0;
    out << passed << "/" << results.size() << " criteria passed\n";
    return passed == results.size() ? 0 : 1;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    if (text.empty()) throw ValidationError("empty grid");
    if (text.find(':') != std::string::npos) {
        const std::vector<std::string> p = split(text, ':');
        if (p.size() != 3) throw ValidationError("grid '" + text + "' must be a:step:b");
        const double a = to_number(p[0]);
        const double step = to_number(p[1]);
        const double b = to_number(p[2]);
        if (!(step > 0.0) || b < a) throw ValidationError("grid '" + text + "' needs step > 0 and a <= b");
        const double span = (b - a) / step;
        if (span > 1e7) throw ValidationError("grid '" + text + "' has too many points");
        const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
        std::vector<double> g(n);
        for (std::size_t i = 0; i < n; ++i) g[i] = a + step * static_cast<double>(i);
        return g;
    }
    std::vector<double> g;
    for (const std::string& s : split(text, ',')) g.push_back(to_number(s));
    return g;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Neutron interferometer simulation: coherence sweeps, density maps and dynamical-phase contrast"};
    app.name("nisim");
    app.fallthrough();
    app.require_subcommand(1);

    Options o;
    app.add_option("--config", o.config_path, "Configuration file (default: $NISIM_CONFIG)");
    app.add_option("--output", o.output, "Output file (default: stdout)");
    app.add_option("--format", o.format, "csv or json");
    app.add_option("--threads", o.threads, "OpenMP thread cap, 0 = runtime default")->check(CLI::NonNegativeNumber);
    app.add_flag("--hz", o.hz, "Read omega values in Hz and convert to rad/s");
    app.add_option("--seed", o.seed, "Monte Carlo seed");
    app.add_option("--method", o.method, "closed_form, quadrature or monte_carlo");
    app.add_option("--phase-model", o.phase_model, "lowfreq or exact loop phases");
    app.add_option("--set", o.settings, "Override a config key, key=value (repeatable)");

    auto* sweep = app.add_subcommand("sweep", "|gamma| versus omega per geometry");
    sweep->add_option("--geometry", o.geometry, "all or a list of 3,4,5");
    sweep->add_option("--axis", o.axis, "y or z");
    sweep->add_option("--omega", o.omega, "omega grid a:step:b or list (default 0:1:400)");

    auto* dmap = app.add_subcommand("densitymap", "Five-blade averaged H intensity over (phi, chi)");
    dmap->add_option("--omega", o.omega, "noise frequency (default 0)");
    dmap->add_option("--grid", o.grid_n, "points per axis, >= 16")->check(CLI::PositiveNumber);
    dmap->add_option("--axis", o.axis, "y or z");

    auto* igram = app.add_subcommand("interferogram", "Noise-averaged interferogram of one geometry");
    igram->add_option("--geometry", o.geometry, "3, 4 or 5");
    igram->add_option("--axis", o.axis, "y or z");
    igram->add_option("--omega", o.omega, "noise frequency (default 0)");
    igram->add_option("--port", o.port, "O or H");
    igram->add_option("--points", o.points, "phase samples over [0, 2pi)");
    igram->add_option("--chi", o.chi, "five-blade loop-2 phase, with angle unit");

    auto* refocus = app.add_subcommand("refocus", "Five-blade H intensity along chi = mu - phi");
    refocus->add_option("--omega", o.omega, "frequency list (default 0,100,150,200)");
    refocus->add_option("--mu", o.mu, "line offset, with angle unit (default pi)");
    refocus->add_option("--points", o.points, "phase samples over [0, 2pi)");
    refocus->add_option("--axis", o.axis, "y or z");

    auto* ddscan = app.add_subcommand("ddscan", "Single-crystal contrast and phase versus misalignment");
    ddscan->add_option("--range", o.range, "misalignment grid in urad, a:step:b or list");
    ddscan->add_option("--table", o.table, "tabulated beta profile (urad, rad)");
    ddscan->add_option("--thickness", o.thickness, "blade thickness, e.g. 2mm");
    ddscan->add_option("--lambda", o.lambda, "wavelength, e.g. 2.71angstrom");
    ddscan->add_option("--sigma", o.sigma, "Lorentzian width, e.g. 4.26urad");

    auto* ddc = app.add_subcommand("ddcontrast", "Maximum contrast under dynamical-phase averaging");
    ddc->add_option("--geometry", o.geometry, "4 (e^{2i beta}) or extra (one added crystal, e^{i beta})");
    ddc->add_option("--table", o.table, "tabulated beta profile (urad, rad)");
    ddc->add_option("--thickness", o.thickness, "blade thickness, e.g. 1mm");
    ddc->add_option("--lambda", o.lambda, "wavelength, e.g. 2.71angstrom");
    ddc->add_option("--sigma", o.sigma, "Lorentzian width, e.g. 4.26urad");
    ddc->add_option("--center", o.center, "misalignment, with angle unit");

    auto* cmp = app.add_subcommand("compare", "Residuals of measured data against a simulated curve");
    cmp->add_option("--measured", o.measured, "CSV with header x,y[,y_err]")->required();
    cmp->add_option("--simulated", o.simulated, "CSV written by nisim or any headed CSV")->required();
    cmp->add_option("--sim-x", o.sim_x, "simulated x column (default first)");
    cmp->add_option("--sim-y", o.sim_y, "simulated y column (default second)");

    auto* self = app.add_subcommand("selftest", "Run the acceptance criteria and print a pass/fail table");
    self->add_option("--only", o.only, "comma-separated criterion numbers");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        set_thread_limit(o.threads);
        if (self->parsed()) return cmd_selftest(o, out);
        const RunConfig cfg = resolve_config(o);
        Table t;
        if (sweep->parsed()) t = cmd_sweep(o, cfg);
        else if (dmap->parsed()) t = cmd_densitymap(o, cfg);
        else if (igram->parsed()) t = cmd_interferogram(o, cfg);
        else if (refocus->parsed()) t = cmd_refocus(o, cfg);
        else if (ddscan->parsed()) t = cmd_ddscan(o, cfg);
        else if (ddc->parsed()) t = cmd_ddcontrast(o, cfg);
        else if (cmp->parsed()) t = cmd_compare(o, cfg);
        emit_table(t, cfg, out);
        return 0;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << " (subdivisions " << e.subdivisions() << ", error estimate "
            << e.error_estimate() << ")\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace nisim::cli
