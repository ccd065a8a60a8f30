// pf — particle-field numerics CLI.
//
// Subcommands:
//   spectrum       eigenvalue solvers for the two equation forms
//   trajectory     classical PF trajectory integration
//   lorentz-check  randomized frame-invariance verifier
//   limits         non-relativistic and photon limit tables

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pf/pf.hpp"

namespace {

// Exit codes are a scripting contract: 0 success, 1 usage/config error,
// 2 numerical failure, 3 regime violation (incl. domain exit).
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitRegime = 3;

/// Length flags accept the literal "pi".
double parse_length(const std::string& text, const std::string& flag) {
    if (text == "pi")
        return std::numbers::pi;
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size())
            throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw pf::InvalidArgument(flag + ": cannot parse '" + text + "' as a length");
    }
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_length(item, flag));
    if (out.empty())
        throw pf::InvalidArgument(flag + ": empty list");
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw pf::InvalidArgument("cannot open output file: " + path);
    out << content;
}

struct UnitScale {
    // Internal solves run in natural units; the SI boundary maps lengths by
    // L, energies by hbar c / L, masses by hbar / (c L).
    bool si = false;
    double length = 1.0;
    double energy = 1.0;

    static UnitScale natural() { return {}; }

    static UnitScale si_with_length(double L) {
        UnitScale s;
        s.si = true;
        s.length = L;
        s.energy = pf::si::hbar * pf::si::c / L;
        return s;
    }

    double mass_to_natural(double m_si) const {
        return si ? m_si * pf::si::c * pf::si::c / energy : m_si;
    }
    double length_to_natural(double x_si) const { return si ? x_si / length : x_si; }
    double energy_from_natural(double e_nat) const { return si ? e_nat * energy : e_nat; }
    double length_from_natural(double x_nat) const { return si ? x_nat * length : x_nat; }
};

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

struct SpectrumArgs {
    bool box = false;
    std::string a_text;
    std::string potential_csv;
    double m0 = 1.0;
    int levels = 3;
    std::string form = "massindep";
    std::string solver = "auto";
    std::size_t grid = 2000;
    double tol = 1e-10;
    std::string bracket_text;
    std::string units = "natural";
    std::string format = "csv";
    std::string out;
    std::string dump_dir;
};

int cmd_spectrum(const SpectrumArgs& args) {
    const auto constants = pf::Constants::natural();
    const pf::EquationForm form = args.form == "massdep" ? pf::EquationForm::MassDependent
                                                         : pf::EquationForm::MassIndependent;

    pf::SpectralProblem problem;
    UnitScale scale = UnitScale::natural();
    bool is_box = false;
    double a_nat = 0.0;

    if (args.box) {
        if (args.a_text.empty()) {
            std::cerr << "spectrum: --box requires --a\n";
            return kExitUsage;
        }
        const double a_input = parse_length(args.a_text, "--a");
        if (args.units == "si")
            scale = UnitScale::si_with_length(a_input);
        a_nat = scale.length_to_natural(a_input);
        problem = pf::SpectralProblem::box(a_nat, scale.mass_to_natural(args.m0), form);
        is_box = true;
    } else if (!args.potential_csv.empty()) {
        std::ifstream in(args.potential_csv);
        if (!in)
            throw pf::InvalidArgument("cannot open potential CSV: " + args.potential_csv);
        std::vector<double> xs, vs;
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream row(line);
            double x, v;
            if (!(row >> x >> v)) {
                if (first) {
                    first = false;
                    continue;
                }
                throw pf::InvalidArgument("potential CSV: malformed row: " + line);
            }
            first = false;
            xs.push_back(x);
            vs.push_back(v);
        }
        if (args.units == "si" && !xs.empty())
            scale = UnitScale::si_with_length(xs.back() - xs.front());
        for (auto& x : xs)
            x = scale.length_to_natural(x);
        for (auto& v : vs)
            v = scale.si ? v / scale.energy : v;
        problem.potential = pf::Potential::sampled(xs, vs);
        problem.m0 = scale.mass_to_natural(args.m0);
        problem.form = form;
        problem.x_lo = xs.front();
        problem.x_hi = xs.back();
        problem.validate();
    } else {
        std::cerr << "spectrum: choose a problem with --box or --potential-csv\n";
        return kExitUsage;
    }
    if (args.levels < 1)
        throw pf::InvalidArgument("spectrum: --levels must be at least 1");

    // Back-end selection: the mass-dependent form is linear in E^2, the
    // mass-independent form is linear only when V is constant.
    std::string backend = args.solver;
    const bool const_potential = problem.potential.kind() != pf::Potential::Kind::SampledGrid;
    if (backend == "auto")
        backend = (form == pf::EquationForm::MassDependent || const_potential) ? "fd"
                                                                               : "shooting";

    pf::Spectrum spec;
    if (backend == "analytic") {
        if (!is_box)
            throw pf::InvalidArgument("spectrum: the analytic back end only solves the box");
        spec = pf::solve_box_analytic(problem.m0, a_nat, args.levels, constants);
    } else if (backend == "fd") {
        spec = pf::solve_fd(problem, args.grid, static_cast<std::size_t>(args.levels),
                            constants);
    } else if (backend == "shooting") {
        std::array<double, 2> bracket{};
        if (!args.bracket_text.empty()) {
            const auto vals = parse_list(args.bracket_text, "--bracket");
            if (vals.size() != 2)
                throw pf::InvalidArgument("--bracket expects 'lo,hi'");
            bracket = {vals[0], vals[1]};
        } else {
            const double rest = problem.m0 * constants.c() * constants.c();
            const double L = problem.x_hi - problem.x_lo;
            const double kin = (static_cast<double>(args.levels) + 1.5) * std::numbers::pi *
                               constants.hbar() * constants.c() / L;
            double v_lo = 0.0, v_hi = 0.0;
            if (problem.potential.kind() == pf::Potential::Kind::SampledGrid) {
                v_lo = v_hi = problem.potential.value(problem.x_lo);
                for (int i = 0; i <= 256; ++i) {
                    const double x = problem.x_lo + (problem.x_hi - problem.x_lo) * i / 256.0;
                    const double v = problem.potential.value(x);
                    v_lo = std::min(v_lo, v);
                    v_hi = std::max(v_hi, v);
                }
            }
            const double pad = 1e-9 * (rest + kin);
            bracket = {rest + std::max(0.0, v_lo) + pad,
                       std::sqrt(kin * kin + rest * rest) + std::max(0.0, v_hi) + pad};
        }
        spec = pf::solve_shooting(problem, bracket, static_cast<std::size_t>(args.levels),
                                  constants, args.tol, args.grid);
    } else {
        std::cerr << "spectrum: unknown solver '" << backend << "'\n";
        return kExitUsage;
    }

    // Human-readable table; the analytic comparison is automatic for boxes.
    std::optional<pf::Spectrum> analytic;
    if (is_box && backend != "analytic")
        analytic = pf::solve_box_analytic(problem.m0, a_nat, args.levels, constants);

    std::printf("backend: %s (grid %zu)\n", spec.meta.backend.c_str(), spec.meta.grid_size);
    std::printf("units: %s\n", scale.si ? "si" : "natural");
    std::printf("%4s  %-24s%s\n", "n", scale.si ? "E [J]" : "E",
                analytic ? "  E_analytic              |dE|/E" : "");
    for (std::size_t i = 0; i < spec.levels.size(); ++i) {
        const double e_out = scale.energy_from_natural(spec.levels[i].energy);
        if (analytic) {
            const double ref = analytic->levels[i].energy;
            const double delta = std::abs(spec.levels[i].energy - ref) / ref;
            std::printf("%4d  %-24.15g  %-24.15g%.3e\n", spec.levels[i].n, e_out,
                        scale.energy_from_natural(ref), delta);
        } else {
            std::printf("%4d  %-24.15g\n", spec.levels[i].n, e_out);
        }
    }
    double max_res = 0.0;
    for (double r : spec.meta.residuals)
        max_res = std::max(max_res, std::abs(r));
    std::printf("max solver residual: %.3e\n", max_res);

    // File output in natural or SI units as requested.
    pf::Spectrum out_spec = spec;
    if (scale.si) {
        for (auto& level : out_spec.levels)
            level.energy = scale.energy_from_natural(level.energy);
    }
    if (!args.out.empty() || args.format == "json") {
        std::ostringstream body;
        if (args.format == "json")
            body << pf::io::spectrum_to_json(out_spec, problem).dump(2) << '\n';
        else
            pf::io::spectrum_to_csv(out_spec, body);
        if (!args.out.empty()) {
            write_text(args.out, body.str());
            std::printf("wrote %s\n", args.out.c_str());
        } else {
            std::cout << body.str();
        }
    }

    if (!args.dump_dir.empty()) {
        std::filesystem::create_directories(args.dump_dir);
        for (const auto& level : spec.levels) {
            std::ostringstream body;
            pf::io::eigenfield_to_csv(level, spec.grid, body);
            const std::string path =
                args.dump_dir + "/eigenfield_" + std::to_string(level.n) + ".csv";
            write_text(path, body.str());
        }
        std::printf("wrote eigenfields to %s\n", args.dump_dir.c_str());
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// trajectory
// ---------------------------------------------------------------------------

struct TrajectoryArgs {
    std::string field = "zero";
    std::string field_csv;
    std::string domain_text = "-10,10";
    std::string x0_text = "0";
    double v0 = 0.0;
    double m = 1.0;
    double g = 1.0;
    std::string force = "zero";
    double dt = 1e-3;
    long steps = 1000;
    std::size_t stride = 1;
    std::string x_ref_text;
    std::string format = "csv";
    std::string out;
};

pf::FieldProfile make_field(const TrajectoryArgs& args) {
    if (!args.field_csv.empty()) {
        std::ifstream in(args.field_csv);
        if (!in)
            throw pf::InvalidArgument("cannot open field CSV: " + args.field_csv);
        return pf::FieldProfile::from_csv(in);
    }
    const auto domain = parse_list(args.domain_text, "--domain");
    if (domain.size() != 2)
        throw pf::InvalidArgument("--domain expects 'lo,hi'");
    const std::string& spec = args.field;
    const auto payload = [&spec]() {
        const auto pos = spec.find(':');
        return pos == std::string::npos ? std::string() : spec.substr(pos + 1);
    }();
    if (spec == "zero")
        return pf::FieldProfile::zero(domain[0], domain[1]);
    if (spec.rfind("linear:", 0) == 0) {
        const auto p = parse_list(payload, "--field linear");
        if (p.size() != 1)
            throw pf::InvalidArgument("--field linear:SLOPE");
        return pf::FieldProfile::linear(p[0], domain[0], domain[1]);
    }
    if (spec.rfind("sine:", 0) == 0) {
        const auto p = parse_list(payload, "--field sine");
        if (p.size() != 2)
            throw pf::InvalidArgument("--field sine:AMPLITUDE,WAVENUMBER");
        return pf::FieldProfile::sine(p[0], p[1], domain[0], domain[1]);
    }
    if (spec.rfind("boxfield:", 0) == 0) {
        const auto p = parse_list(payload, "--field boxfield");
        if (p.size() != 3)
            throw pf::InvalidArgument("--field boxfield:N,A,AMPLITUDE");
        return pf::FieldProfile::box_eigenfield(static_cast<int>(p[0]), p[1], p[2]);
    }
    throw pf::InvalidArgument("unknown field preset: " + spec);
}

struct ForceModel {
    std::function<double(double)> force;
    std::function<double(double)> potential;
};

ForceModel make_force(const std::string& spec) {
    const auto payload = [&spec]() {
        const auto pos = spec.find(':');
        return pos == std::string::npos ? std::string() : spec.substr(pos + 1);
    }();
    if (spec == "zero")
        return {[](double) { return 0.0; }, [](double) { return 0.0; }};
    if (spec.rfind("harmonic", 0) == 0) {
        double k = 1.0, center = 0.0;
        if (!payload.empty()) {
            const auto p = parse_list(payload, "--force harmonic");
            if (p.size() > 2)
                throw pf::InvalidArgument("--force harmonic[:K[,CENTER]]");
            k = p[0];
            if (p.size() == 2)
                center = p[1];
        }
        return {[k, center](double x) { return -k * (x - center); },
                [k, center](double x) { return 0.5 * k * (x - center) * (x - center); }};
    }
    if (spec.rfind("const:", 0) == 0) {
        const auto p = parse_list(payload, "--force const");
        if (p.size() != 1)
            throw pf::InvalidArgument("--force const:F");
        const double f = p[0];
        return {[f](double) { return f; }, [f](double x) { return -f * x; }};
    }
    throw pf::InvalidArgument("unknown force preset: " + spec);
}

int cmd_trajectory(const TrajectoryArgs& args) {
    if (args.steps < 0)
        throw pf::InvalidArgument("trajectory: --steps must be non-negative");
    const pf::FieldProfile profile = make_field(args);
    const ForceModel model = make_force(args.force);
    const pf::PFCoupling g(args.g);

    pf::ParticleState state0;
    state0.x = parse_length(args.x0_text, "--x0");
    state0.v_p = args.v0;
    state0.m = args.m;

    pf::IntegrationOptions opts;
    opts.potential = model.potential;
    opts.record_stride = args.stride;
    if (!args.x_ref_text.empty())
        opts.x_ref = parse_length(args.x_ref_text, "--x-ref");

    const pf::TrajectoryRecord rec = pf::integrate_particle(
        model.force, state0, args.dt, static_cast<std::size_t>(args.steps), profile, g, opts);

    // f_PF consistency residual |m q'' - f_PF| by central differences; only
    // defined on interior samples of stride-1 records.
    std::vector<double> residual(rec.ts.size(), std::numeric_limits<double>::quiet_NaN());
    if (args.stride == 1 && rec.ts.size() >= 3) {
        for (std::size_t i = 1; i + 1 < rec.ts.size(); ++i) {
            const double qdd =
                (rec.qs[i + 1] - 2.0 * rec.qs[i] + rec.qs[i - 1]) / (args.dt * args.dt);
            pf::ParticleState s{rec.xs[i], rec.vs[i], args.m};
            const double fpf = pf::pf_force(s, model.force(rec.xs[i]), profile, g);
            residual[i] = std::abs(args.m * qdd - fpf);
        }
    }

    std::ostringstream body;
    if (args.format == "json")
        body << pf::io::trajectory_to_json(rec, &residual, "fpf_residual").dump(2) << '\n';
    else
        pf::io::trajectory_to_csv(rec, body, &residual, "fpf_residual");
    write_text(args.out, body.str());

    if (rec.domain_exit) {
        std::cerr << "warning: trajectory left the field domain after " << rec.ts.size()
                  << " samples; output is partial\n";
        return kExitRegime;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// lorentz-check
// ---------------------------------------------------------------------------

struct LorentzArgs {
    std::uint64_t seed = 42;
    std::size_t samples = 10000;
    double vmax = 0.9;
    double slope_max = 0.1;
    double gamma_min = 10.0;
    std::string format = "csv";
    std::string out;
};

int cmd_lorentz_check(const LorentzArgs& args) {
    pf::LorentzCheckConfig config;
    config.seed = args.seed;
    if (const char* env = std::getenv("PF_SEED"))
        config.seed = std::strtoull(env, nullptr, 10);
    config.samples = args.samples;
    config.v_max_frac = args.vmax;
    config.slope_max = args.slope_max;
    config.gamma_min = args.gamma_min;
    if (!(config.v_max_frac > 0.0 && config.v_max_frac < 1.0))
        throw pf::InvalidArgument("lorentz-check: --vmax must be in (0, 1)");

    const auto report = pf::run_lorentz_check(config, pf::Constants::natural());

    std::ostringstream body;
    if (args.format == "json")
        body << pf::io::lorentz_report_to_json(report).dump(2) << '\n';
    else
        pf::io::lorentz_report_to_csv(report, body);
    write_text(args.out, body.str());

    std::fprintf(stderr,
                 "lorentz-check: seed=%llu samples=%zu\n"
                 "  max |residual_a18| (relative) = %.3e\n"
                 "  max truncated-form discrepancy = %.3e over %zu in-regime samples\n"
                 "  out-of-regime samples: %zu\n",
                 static_cast<unsigned long long>(config.seed), config.samples,
                 report.max_residual, report.max_delta_truncated,
                 report.truncated_regime_count, report.out_of_regime_count);

    const bool ok = report.max_residual <= 1e-10 && report.max_delta_truncated <= 1e-10;
    return ok ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------------------
// limits
// ---------------------------------------------------------------------------

struct LimitsArgs {
    std::string family;
    std::string a_text = "pi";
    int n = 1;
    std::string m0_list = "100,1000,10000";
    std::string gamma_list = "1e3,1e6,1e9";
    std::string chi_list = "0,0.5,2";
    std::string units = "natural";
    std::string format = "csv";
    std::string out;
};

int cmd_limits(const LimitsArgs& args) {
    if (args.units != "natural") {
        std::cerr << "limits: only natural units are supported (the tables are "
                     "dimensionless diagnostics)\n";
        return kExitUsage;
    }
    const auto constants = pf::Constants::natural();

    if (args.family == "nonrel") {
        const double a = parse_length(args.a_text, "--a");
        const auto m0s = parse_list(args.m0_list, "--m0-list");
        std::ostringstream body;
        nlohmann::json rows = nlohmann::json::array();
        body << "m0,n,excess,E_nr,deviation,bound\n";
        std::printf("%12s %4s %14s %14s %12s %12s\n", "m0", "n", "E_n - m0 c^2", "E_nr",
                    "deviation", "bound");
        for (double m0 : m0s) {
            const auto spec = pf::solve_box_analytic(m0, a, args.n, constants);
            const auto report = pf::nonrel_limit_report(spec, m0, a, constants);
            for (const auto& row : report.rows) {
                body << pf::io::format_double(m0) << ',' << row.n << ','
                     << pf::io::format_double(row.excess) << ','
                     << pf::io::format_double(row.nonrel) << ','
                     << pf::io::format_double(row.deviation) << ','
                     << pf::io::format_double(row.bound) << '\n';
                rows.push_back({{"m0", m0},
                                {"n", row.n},
                                {"excess", row.excess},
                                {"E_nr", row.nonrel},
                                {"deviation", row.deviation},
                                {"bound", row.bound}});
                std::printf("%12g %4d %14.6e %14.6e %12.3e %12.3e\n", m0, row.n, row.excess,
                            row.nonrel, row.deviation, row.bound);
            }
        }
        if (!args.out.empty() || args.format == "json")
            write_text(args.out, args.format == "json" ? rows.dump(2) + "\n" : body.str());
        return kExitOk;
    }

    if (args.family == "photon") {
        const auto gammas = parse_list(args.gamma_list, "--gamma-list");
        const auto chis = parse_list(args.chi_list, "--chi-list");
        std::ostringstream body;
        nlohmann::json rows = nlohmann::json::array();
        body << "gamma_p,chi_slope,gamma_pf,one_minus_qdot_over_c,bound\n";
        std::printf("%12s %10s %14s %22s %14s\n", "gamma_p", "chi_slope", "gamma_pf",
                    "1 - qdot/c", "1/(2 gamma_pf^2)");
        for (double gp : gammas) {
            for (double chi : chis) {
                const double gpf = pf::gamma_pf_kinematic(gp, chi);
                const double deficit = pf::pf_speed_deficit(gp, chi);
                const double bound = 0.5 / (gpf * gpf);
                body << pf::io::format_double(gp) << ',' << pf::io::format_double(chi) << ','
                     << pf::io::format_double(gpf) << ',' << pf::io::format_double(deficit)
                     << ',' << pf::io::format_double(bound) << '\n';
                rows.push_back({{"gamma_p", gp},
                                {"chi_slope", chi},
                                {"gamma_pf", gpf},
                                {"one_minus_qdot_over_c", deficit},
                                {"bound", bound}});
                std::printf("%12g %10g %14.6g %22.15e %14.6e\n", gp, chi, gpf, deficit,
                            bound);
            }
        }
        if (!args.out.empty() || args.format == "json")
            write_text(args.out, args.format == "json" ? rows.dump(2) + "\n" : body.str());
        return kExitOk;
    }

    std::cerr << "limits: unknown family '" << args.family << "' (expected nonrel or photon)\n";
    return kExitUsage;
}

/// Flat key=value config support: tokens from the file are spliced in right
/// after the subcommand name, so explicitly passed flags override the file
/// (every option takes the last occurrence).
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::size_t config_at = args.size();
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            config_at = i;
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            config_at = i;
            break;
        }
    }
    if (path.empty())
        return args;

    std::ifstream in(path);
    if (!in)
        throw pf::InvalidArgument("cannot open config file: " + path);
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw pf::InvalidArgument("config file: expected key=value, got: " + line);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw pf::InvalidArgument("config file: empty key in line: " + line);
        injected.push_back("--" + key + "=" + value);
    }

    // Drop the --config tokens and splice the file's tokens right after the
    // subcommand name, ahead of every user flag.
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i == config_at) {
            if (args[i] == "--config")
                ++i; // skip the path token too
            continue;
        }
        out.push_back(args[i]);
    }
    if (!out.empty())
        out.insert(out.begin() + 1, injected.begin(), injected.end());
    return out;
}

int dispatch(const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const pf::SuperluminalError& e) {
        std::cerr << "error (regime): " << e.what() << '\n';
        return kExitRegime;
    } catch (const pf::OutOfRegime& e) {
        std::cerr << "error (regime): " << e.what() << '\n';
        return kExitRegime;
    } catch (const pf::InvalidArgument& e) {
        std::cerr << "error (usage): " << e.what() << '\n';
        return kExitUsage;
    } catch (const pf::DomainError& e) {
        std::cerr << "error (usage): " << e.what() << '\n';
        return kExitUsage;
    } catch (const pf::NumericalFailure& e) {
        std::cerr << "error (numerical): " << e.what() << '\n';
        return kExitNumerical;
    } catch (const pf::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"particle-field numerics: spectra, trajectories, invariance checks"};
    app.require_subcommand(1);

    SpectrumArgs spectrum_args;
    auto* spectrum = app.add_subcommand("spectrum", "solve an eigenvalue problem");
    std::string spectrum_config;
    spectrum->add_option("--config", spectrum_config,
                         "flat key=value file mirroring the flags; flags override it");
    spectrum->add_flag("--box", spectrum_args.box, "infinite box potential on [0, a]");
    spectrum->add_option("--a", spectrum_args.a_text, "box width (accepts 'pi')");
    spectrum->add_option("--potential-csv", spectrum_args.potential_csv,
                         "sampled potential, CSV columns x,V");
    spectrum->add_option("--m0", spectrum_args.m0, "rest mass (0 = photonic)");
    spectrum->add_option("--levels", spectrum_args.levels, "number of levels");
    spectrum->add_option("--form", spectrum_args.form, "massdep | massindep")
        ->check(CLI::IsMember({"massdep", "massindep"}));
    spectrum->add_option("--solver", spectrum_args.solver, "auto | analytic | fd | shooting")
        ->check(CLI::IsMember({"auto", "analytic", "fd", "shooting"}));
    spectrum->add_option("--grid", spectrum_args.grid, "grid size / shooting steps");
    spectrum->add_option("--tol", spectrum_args.tol, "shooting boundary tolerance");
    spectrum->add_option("--bracket", spectrum_args.bracket_text, "shooting bracket 'lo,hi'");
    spectrum->add_option("--units", spectrum_args.units, "natural | si")
        ->check(CLI::IsMember({"natural", "si"}));
    spectrum->add_option("--format", spectrum_args.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    spectrum->add_option("--out", spectrum_args.out, "output file (default stdout table only)");
    spectrum->add_option("--dump-eigenfields", spectrum_args.dump_dir,
                         "directory for per-level x,chi CSV dumps");

    TrajectoryArgs trajectory_args;
    auto* trajectory = app.add_subcommand("trajectory", "integrate a classical PF trajectory");
    std::string trajectory_config;
    trajectory->add_option("--config", trajectory_config,
                           "flat key=value file mirroring the flags; flags override it");
    trajectory->add_option("--field", trajectory_args.field,
                           "zero | linear:S | sine:A,K | boxfield:N,A,AMP");
    trajectory->add_option("--field-csv", trajectory_args.field_csv,
                           "sampled field, CSV columns x,chi");
    trajectory->add_option("--domain", trajectory_args.domain_text,
                           "field domain 'lo,hi' for analytic presets");
    trajectory->add_option("--x0", trajectory_args.x0_text, "initial position (accepts 'pi')");
    trajectory->add_option("--v0", trajectory_args.v0, "initial velocity");
    trajectory->add_option("--m", trajectory_args.m, "particle mass");
    trajectory->add_option("--g", trajectory_args.g, "PF coupling factor");
    trajectory->add_option("--force", trajectory_args.force,
                           "zero | harmonic[:K[,CENTER]] | const:F");
    trajectory->add_option("--dt", trajectory_args.dt, "time step");
    trajectory->add_option("--steps", trajectory_args.steps, "number of steps");
    trajectory->add_option("--stride", trajectory_args.stride, "record every k-th step");
    trajectory->add_option("--x-ref", trajectory_args.x_ref_text,
                           "reference point for q (default: domain left edge)");
    trajectory->add_option("--format", trajectory_args.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    trajectory->add_option("--out", trajectory_args.out, "output file (default stdout)");

    LorentzArgs lorentz_args;
    auto* lorentz = app.add_subcommand("lorentz-check", "randomized invariance verifier");
    std::string lorentz_config;
    lorentz->add_option("--config", lorentz_config,
                        "flat key=value file mirroring the flags; flags override it");
    lorentz->add_option("--seed", lorentz_args.seed, "base seed (PF_SEED overrides)");
    lorentz->add_option("--samples", lorentz_args.samples, "number of sampled contexts");
    lorentz->add_option("--vmax", lorentz_args.vmax, "|v|/c bound for sampled velocities");
    lorentz->add_option("--slope-max", lorentz_args.slope_max, "|dchi/dx'| bound");
    lorentz->add_option("--gamma-min", lorentz_args.gamma_min,
                        "gamma_p threshold for the truncated comparison");
    lorentz->add_option("--format", lorentz_args.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    lorentz->add_option("--out", lorentz_args.out, "report file (default stdout)");

    LimitsArgs limits_args;
    auto* limits = app.add_subcommand("limits", "limit-law tables");
    std::string limits_config;
    limits->add_option("--config", limits_config,
                       "flat key=value file mirroring the flags; flags override it");
    limits->add_option("--family", limits_args.family, "nonrel | photon")->required();
    limits->add_option("--a", limits_args.a_text, "box width (accepts 'pi')");
    limits->add_option("--n", limits_args.n, "number of levels for the nonrel table");
    limits->add_option("--m0-list", limits_args.m0_list, "comma list of rest masses");
    limits->add_option("--gamma-list", limits_args.gamma_list, "comma list of gamma_p values");
    limits->add_option("--chi-list", limits_args.chi_list, "comma list of chi' values");
    limits->add_option("--units", limits_args.units, "natural only");
    limits->add_option("--format", limits_args.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    limits->add_option("--out", limits_args.out, "output file (default stdout)");

    for (auto* sub : {spectrum, trajectory, lorentz, limits})
        for (auto* opt : sub->get_options())
            opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    try {
        std::vector<std::string> args = expand_config_args(argc, argv);
        std::reverse(args.begin(), args.end()); // CLI11 consumes from the back
        app.parse(args);
    } catch (const pf::InvalidArgument& e) {
        std::cerr << "error (usage): " << e.what() << '\n';
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (spectrum->parsed())
        return dispatch([&] { return cmd_spectrum(spectrum_args); });
    if (trajectory->parsed())
        return dispatch([&] { return cmd_trajectory(trajectory_args); });
    if (lorentz->parsed())
        return dispatch([&] { return cmd_lorentz_check(lorentz_args); });
    if (limits->parsed())
        return dispatch([&] { return cmd_limits(limits_args); });
    return kExitUsage;
}
