#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pf/errors.hpp"
#include "pf/kinematics.hpp"
#include "pf/relativity.hpp"
#include "pf/spectral.hpp"

namespace pf::io {

using nlohmann::json;

/// Shortest round-trip decimal form, locale-independent ('.' decimal point).
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

inline void trajectory_to_csv(const TrajectoryRecord& rec, std::ostream& out,
                              const std::vector<double>* extra = nullptr,
                              const std::string& extra_name = "") {
    out << "t,x,v,q,E";
    if (extra)
        out << ',' << extra_name;
    out << '\n';
    for (std::size_t i = 0; i < rec.ts.size(); ++i) {
        out << format_double(rec.ts[i]) << ',' << format_double(rec.xs[i]) << ','
            << format_double(rec.vs[i]) << ',' << format_double(rec.qs[i]) << ','
            << format_double(rec.energy[i]);
        if (extra)
            out << ',' << format_double((*extra)[i]);
        out << '\n';
    }
}

/// JSON array of samples.
inline json trajectory_to_json(const TrajectoryRecord& rec,
                               const std::vector<double>* extra = nullptr,
                               const std::string& extra_name = "") {
    json samples = json::array();
    for (std::size_t i = 0; i < rec.ts.size(); ++i) {
        json s = {{"t", rec.ts[i]},
                  {"x", rec.xs[i]},
                  {"v", rec.vs[i]},
                  {"q", rec.qs[i]},
                  {"E", rec.energy[i]}};
        if (extra && std::isfinite((*extra)[i]))
            s[extra_name] = (*extra)[i];
        samples.push_back(std::move(s));
    }
    return samples;
}

inline TrajectoryRecord trajectory_from_json(const json& samples) {
    if (!samples.is_array())
        throw InvalidArgument("trajectory JSON must be an array of samples");
    TrajectoryRecord rec;
    for (const auto& s : samples) {
        rec.ts.push_back(s.at("t").get<double>());
        rec.xs.push_back(s.at("x").get<double>());
        rec.vs.push_back(s.at("v").get<double>());
        rec.qs.push_back(s.at("q").get<double>());
        rec.energy.push_back(s.at("E").get<double>());
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

inline json spectral_problem_to_json(const SpectralProblem& problem) {
    json j;
    switch (problem.potential.kind()) {
    case Potential::Kind::Zero:
        j["potential"] = "zero";
        break;
    case Potential::Kind::InfiniteBox:
        j["potential"] = "infinite_box";
        j["a"] = problem.potential.box_width();
        break;
    case Potential::Kind::SampledGrid:
        j["potential"] = "sampled";
        break;
    }
    j["m0"] = problem.m0;
    j["form"] =
        problem.form == EquationForm::MassDependent ? "mass_dependent" : "mass_independent";
    j["domain"] = {problem.x_lo, problem.x_hi};
    j["boundary"] = "dirichlet";
    return j;
}

inline void spectrum_to_csv(const Spectrum& spec, std::ostream& out) {
    out << "n,E\n";
    for (const auto& level : spec.levels)
        out << level.n << ',' << format_double(level.energy) << '\n';
}

inline json spectrum_to_json(const Spectrum& spec, const SpectralProblem& problem) {
    json levels = json::array();
    for (const auto& level : spec.levels)
        levels.push_back({{"n", level.n}, {"energy", level.energy}, {"nodes", level.nodes}});
    json meta = {{"backend", spec.meta.backend},
                 {"grid_size", spec.meta.grid_size},
                 {"residuals", spec.meta.residuals}};
    if (!spec.meta.brackets.empty()) {
        json brackets = json::array();
        for (const auto& b : spec.meta.brackets)
            brackets.push_back({b[0], b[1]});
        meta["brackets"] = brackets;
    }
    return json{{"problem", spectral_problem_to_json(problem)},
                {"levels", levels},
                {"meta", meta}};
}

struct SpectrumSummary {
    struct Level {
        int n;
        double energy;
        int nodes;
    };
    std::vector<Level> levels;
    std::string backend;
};

inline SpectrumSummary spectrum_from_json(const json& j) {
    SpectrumSummary summary;
    for (const auto& level : j.at("levels"))
        summary.levels.push_back({level.at("n").get<int>(), level.at("energy").get<double>(),
                                  level.at("nodes").get<int>()});
    summary.backend = j.at("meta").at("backend").get<std::string>();
    return summary;
}

/// Per-level eigenfield dump, two columns x,chi.
inline void eigenfield_to_csv(const SpectrumLevel& level, const std::vector<double>& grid,
                              std::ostream& out) {
    out << "x,chi\n";
    for (double x : grid)
        out << format_double(x) << ',' << format_double(level.eigenfield.value(x)) << '\n';
}

// ---------------------------------------------------------------------------
// Lorentz-invariance reports
// ---------------------------------------------------------------------------

inline constexpr const char* kLorentzCsvHeader =
    "seed,v_p,v_p_prime,v_pf,chi_slope,gamma_pf_kinematic,gamma_pf_matching,"
    "residual_a18,delta_truncated,delta_full";

inline void lorentz_report_to_csv(const LorentzCheckReport& report, std::ostream& out) {
    out << kLorentzCsvHeader << '\n';
    for (const auto& row : report.rows) {
        out << row.seed << ',' << format_double(row.v_p) << ','
            << format_double(row.v_p_prime) << ',' << format_double(row.v_pf) << ','
            << format_double(row.chi_slope) << ',' << format_double(row.gamma_pf_kinematic)
            << ',' << format_double(row.gamma_pf_matching) << ','
            << format_double(row.residual_matching) << ','
            << format_double(row.delta_truncated) << ',' << format_double(row.delta_full)
            << '\n';
    }
}

inline json lorentz_report_to_json(const LorentzCheckReport& report) {
    json rows = json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"seed", row.seed},
                        {"v_p", row.v_p},
                        {"v_p_prime", row.v_p_prime},
                        {"v_pf", row.v_pf},
                        {"chi_slope", row.chi_slope},
                        {"gamma_pf_kinematic", row.gamma_pf_kinematic},
                        {"gamma_pf_matching", row.gamma_pf_matching},
                        {"residual_a18", row.residual_matching},
                        {"delta_truncated", row.delta_truncated},
                        {"delta_full", row.delta_full}});
    }
    return json{{"config",
                 {{"seed", report.config.seed},
                  {"samples", report.config.samples},
                  {"v_max_frac", report.config.v_max_frac},
                  {"slope_max", report.config.slope_max},
                  {"gamma_min", report.config.gamma_min}}},
                {"summary",
                 {{"max_residual_a18", report.max_residual},
                  {"max_delta_truncated", report.max_delta_truncated},
                  {"max_delta_full", report.max_delta_full},
                  {"truncated_regime_count", report.truncated_regime_count},
                  {"out_of_regime_count", report.out_of_regime_count}}},
                {"rows", rows}};
}

inline LorentzCheckReport lorentz_report_from_json(const json& j) {
    LorentzCheckReport report;
    report.config.seed = j.at("config").at("seed").get<std::uint64_t>();
    report.config.samples = j.at("config").at("samples").get<std::size_t>();
    report.max_residual = j.at("summary").at("max_residual_a18").get<double>();
    for (const auto& r : j.at("rows")) {
        LorentzSampleRow row;
        row.seed = r.at("seed").get<std::uint64_t>();
        row.v_p = r.at("v_p").get<double>();
        row.v_p_prime = r.at("v_p_prime").get<double>();
        row.v_pf = r.at("v_pf").get<double>();
        row.chi_slope = r.at("chi_slope").get<double>();
        row.gamma_pf_kinematic = r.at("gamma_pf_kinematic").get<double>();
        row.gamma_pf_matching = r.at("gamma_pf_matching").get<double>();
        row.residual_matching = r.at("residual_a18").get<double>();
        const auto& dt = r.at("delta_truncated");
        const auto& df = r.at("delta_full");
        row.delta_truncated =
            dt.is_null() ? std::numeric_limits<double>::quiet_NaN() : dt.get<double>();
        row.delta_full =
            df.is_null() ? std::numeric_limits<double>::quiet_NaN() : df.get<double>();
        report.rows.push_back(row);
    }
    return report;
}

} // namespace pf::io
