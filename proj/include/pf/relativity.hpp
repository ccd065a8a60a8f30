#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "pf/constants.hpp"
#include "pf/errors.hpp"

namespace pf {

/// Lorentz factor (1 - v^2/c^2)^{-1/2}, computed as 1/sqrt((1-v/c)(1+v/c))
/// so it stays accurate close to c.
inline double gamma(double v, double c) {
    const double beta = v / c;
    if (!(std::abs(beta) < 1.0))
        throw SuperluminalError("gamma: |v| must be strictly below c");
    return 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
}

/// Relativistic particle kinetic energy m0 c^2 (gamma_p - 1).
inline double rel_kinetic_particle(double v_p, double m0, double c) {
    if (m0 < 0.0)
        throw InvalidArgument("rel_kinetic_particle: m0 must be non-negative");
    return m0 * c * c * (gamma(v_p, c) - 1.0);
}

/// Relativistic field kinetic energy K_rF = K_rP chi'^2.
inline double rel_kinetic_field(double v_p, double m0, double chi_slope, double c) {
    return rel_kinetic_particle(v_p, m0, c) * chi_slope * chi_slope;
}

/// Kinematic PF factor (gamma_p - 1)(1 + chi'^2) + 1, from equating the PF
/// kinetic energy m0 c^2 (gamma_PF - 1) with K_rP + K_rF.
inline double gamma_pf_kinematic(double gamma_p, double chi_slope) {
    if (!(gamma_p >= 1.0))
        throw InvalidArgument("gamma_pf_kinematic: gamma_p must be >= 1");
    return (gamma_p - 1.0) * (1.0 + chi_slope * chi_slope) + 1.0;
}

/// PF speed q' = c sqrt(1 - gamma_PF^{-2}). Monotone in gamma_p and |chi'|,
/// strictly below c (clamped to the largest double below c where rounding
/// would otherwise saturate).
inline double pf_speed_relativistic(double gamma_p, double chi_slope, double c) {
    const double g = gamma_pf_kinematic(gamma_p, chi_slope);
    const double inv = 1.0 / g;
    double speed = c * std::sqrt((1.0 - inv) * (1.0 + inv));
    if (speed >= c)
        speed = std::nextafter(c, 0.0);
    return speed;
}

/// Exact 1 - q'/c for the kinematic PF speed, evaluated in complementary
/// form so the photon limit is resolvable far below double cancellation:
/// 1 - sqrt(1-x) = x / (1 + sqrt(1-x)) with x = gamma_PF^{-2}.
inline double pf_speed_deficit(double gamma_p, double chi_slope) {
    const double g = gamma_pf_kinematic(gamma_p, chi_slope);
    const double x = 1.0 / (g * g);
    return x / (1.0 + std::sqrt(1.0 - x));
}

/// Interval per unit coordinate time in the unprimed frame:
/// ds^2 = c^2 dt^2 / [(gamma_p - 1)(1 + chi'^2) + 1]^2.
inline double interval_unprimed(double dt, double gamma_p, double chi_slope, double c) {
    const double g = gamma_pf_kinematic(gamma_p, chi_slope);
    const double cdt = c * dt;
    return cdt * cdt / (g * g);
}

/// An event (t, q) in a PF coordinate frame.
struct Event {
    double t = 0.0;
    double q = 0.0;
};

/// Standard-configuration boost of an event by frame velocity v_pf.
inline Event lorentz_boost(const Event& e, double v_pf, double c) {
    const double g = gamma(v_pf, c);
    return {g * (e.t - v_pf * e.q / (c * c)), g * (e.q - v_pf * e.t)};
}

/// Relativistic composition (u' + v) / (1 + u'v/c^2), strictly inside (-c, c).
inline double velocity_addition(double u_prime, double v, double c) {
    if (!(std::abs(u_prime) < c) || !(std::abs(v) < c))
        throw SuperluminalError("velocity_addition: inputs must be strictly below c");
    double w = (u_prime + v) / (1.0 + u_prime * v / (c * c));
    if (w >= c)
        w = std::nextafter(c, 0.0);
    else if (w <= -c)
        w = std::nextafter(-c, 0.0);
    return w;
}

/// The two-frame data of a boost: particle velocity in both frames, the
/// relative frame velocity, and the field slope in each frame.
struct FrameContext {
    double v_p = 0.0;             // particle velocity in the unprimed frame
    double v_p_prime = 0.0;       // particle velocity in the primed frame
    double v_pf = 0.0;            // relative frame velocity (the PF velocity)
    double chi_slope_primed = 0.0;// dchi/dx'
    double chi_slope = 0.0;       // dchi/dx
};

struct ABFactors {
    double a; // gamma_p (1 - v_p v_pf / c^2)
    double b; // (dchi/dx') (1 - v_pf v'_p / c^2)
};

inline ABFactors ab_factors(const FrameContext& ctx, double c) {
    const double c2 = c * c;
    return {gamma(ctx.v_p, c) * (1.0 - ctx.v_p * ctx.v_pf / c2),
            ctx.chi_slope_primed * (1.0 - ctx.v_pf * ctx.v_p_prime / c2)};
}

/// Matching factor in the published closed form:
/// gamma_PF = gamma'_p / [(1 - 2 s^2) a^2 + 2 b^2]^{1/2}, s = dchi/dx'.
inline double gamma_pf_matching(const FrameContext& ctx, double c) {
    const auto [a, b] = ab_factors(ctx, c);
    const double s2 = ctx.chi_slope_primed * ctx.chi_slope_primed;
    const double bracket = (1.0 - 2.0 * s2) * a * a + 2.0 * b * b;
    if (!(bracket > 0.0))
        throw OutOfRegime("gamma_pf_matching: non-positive bracket (slope too large for "
                          "the small-field regime)",
                          bracket);
    return gamma(ctx.v_p_prime, c) / std::sqrt(bracket);
}

/// Signed residual of the matching condition for a candidate gamma_PF:
/// gamma_PF^2 [(1 - 2 s^2) a^2 + 2 b^2] - gamma'_p^2. Zero iff gamma_PF is
/// the gamma_pf_matching value.
inline double matching_residual(const FrameContext& ctx, double gamma_pf, double c) {
    const auto [a, b] = ab_factors(ctx, c);
    const double s2 = ctx.chi_slope_primed * ctx.chi_slope_primed;
    const double gp = gamma(ctx.v_p_prime, c);
    return gamma_pf * gamma_pf * ((1.0 - 2.0 * s2) * a * a + 2.0 * b * b) - gp * gp;
}

/// Matching factor that makes the second-order interval forms of the two
/// frames coincide identically: the solution of
///   gamma'^{-2} (1 - 2 s^2) = (a gamma)^{-2} (1 - 2 b^2 gamma^2),
/// i.e. gamma = gamma' / [(1 - 2 s^2) a^2 + 2 gamma'^2 b^2]^{1/2}.
/// It differs from gamma_pf_matching by the gamma'^2 weight on the slope
/// term; with it the truncated forms agree to rounding and the untruncated
/// forms differ only at fourth order in the slope.
inline double gamma_pf_form_invariant(const FrameContext& ctx, double c) {
    const auto [a, b] = ab_factors(ctx, c);
    const double s2 = ctx.chi_slope_primed * ctx.chi_slope_primed;
    const double gp = gamma(ctx.v_p_prime, c);
    const double bracket = (1.0 - 2.0 * s2) * a * a + 2.0 * gp * gp * b * b;
    if (!(bracket > 0.0))
        throw OutOfRegime("gamma_pf_form_invariant: non-positive bracket", bracket);
    return gp / std::sqrt(bracket);
}

/// Interval per unit coordinate time in the primed frame for a given
/// gamma_PF: ds^2 = c^2 dt'^2 / [(gamma_PF a - 1)(1 + gamma_PF^2 b^2) + 1]^2.
/// Requires gamma_PF a >= 1, otherwise the bracket can invert.
inline double interval_primed(double dt_prime, const FrameContext& ctx, double gamma_pf,
                              double c) {
    const auto [a, b] = ab_factors(ctx, c);
    const double ga = gamma_pf * a;
    const double gb2 = gamma_pf * gamma_pf * b * b;
    const double bracket = (ga - 1.0) * (1.0 + gb2) + 1.0;
    if (!(ga >= 1.0))
        throw OutOfRegime("interval_primed: gamma_PF * a < 1 (bracket out of regime)", bracket);
    const double cdt = c * dt_prime;
    return cdt * cdt / (bracket * bracket);
}

/// Hard bound and warning threshold for the small-slope expansion.
inline constexpr double kExpansionSlopeMax = 0.1;
inline constexpr double kExpansionSlopeWarn = 0.05;

/// Second-order truncation c^2 dt^2 gamma^{-2} (1 - 2 slope^2), valid for
/// small slopes; |slope| above kExpansionSlopeMax is out of regime.
inline double expansion_interval(double dt, double gamma_like, double slope_like, double c) {
    if (!(std::abs(slope_like) <= kExpansionSlopeMax))
        throw OutOfRegime("expansion_interval: |slope| beyond the small-field bound",
                          slope_like);
    if (!(gamma_like > 0.0))
        throw InvalidArgument("expansion_interval: gamma_like must be positive");
    const double cdt = c * dt;
    return cdt * cdt / (gamma_like * gamma_like) * (1.0 - 2.0 * slope_like * slope_like);
}

/// Build a mutually consistent two-frame context from primed-frame data:
/// v_p by velocity composition, dchi/dx by the boost chain rule
/// chi' = gamma_PF b with the closed-form matching factor.
inline FrameContext make_frame_context(double v_p_prime, double v_pf,
                                       double chi_slope_primed, double c) {
    FrameContext ctx;
    ctx.v_p_prime = v_p_prime;
    ctx.v_pf = v_pf;
    ctx.chi_slope_primed = chi_slope_primed;
    ctx.v_p = velocity_addition(v_p_prime, v_pf, c);
    const auto [a, b] = ab_factors(ctx, c);
    (void)a;
    ctx.chi_slope = gamma_pf_matching(ctx, c) * b;
    return ctx;
}

/// Consistency check of a hand-built context (velocity composition to 1e-12 c).
inline void validate_frame_context(const FrameContext& ctx, double c) {
    if (!(std::abs(ctx.v_p) < c) || !(std::abs(ctx.v_p_prime) < c) || !(std::abs(ctx.v_pf) < c))
        throw SuperluminalError("FrameContext: all velocities must be strictly below c");
    const double composed = velocity_addition(ctx.v_p_prime, ctx.v_pf, c);
    if (std::abs(composed - ctx.v_p) > 1e-12 * c)
        throw InvalidArgument("FrameContext: velocities inconsistent under composition");
}

// ---------------------------------------------------------------------------
// Randomized frame-invariance verifier
// ---------------------------------------------------------------------------

struct LorentzCheckConfig {
    std::uint64_t seed = 1;
    std::size_t samples = 10000;
    double v_max_frac = 0.9;  // |v|/c bound for the primed velocity and v_pf
    double slope_max = 0.1;   // |dchi/dx'| bound
    double gamma_min = 10.0;  // truncated comparison restricted to gamma_p >= this
};

struct LorentzSampleRow {
    std::uint64_t seed = 0;
    double v_p = 0.0;
    double v_p_prime = 0.0;
    double v_pf = 0.0;
    double chi_slope = 0.0;
    double gamma_pf_kinematic = 0.0;
    double gamma_pf_matching = 0.0;
    double residual_matching = 0.0; // relative to gamma'_p^2
    double delta_truncated = 0.0;   // NaN when out of regime
    double delta_full = 0.0;        // NaN when out of regime
    bool in_truncated_regime = false;
};

struct LorentzCheckReport {
    LorentzCheckConfig config;
    std::vector<LorentzSampleRow> rows;
    double max_residual = 0.0;
    double max_delta_truncated = 0.0; // over rows in the truncated regime
    double max_delta_full = 0.0;      // over rows in the truncated regime
    std::size_t truncated_regime_count = 0;
    std::size_t out_of_regime_count = 0;
};

namespace detail {
/// Deterministic uniform double in [0, 1) from the engine's raw output.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}
} // namespace detail

/// Evaluate one sampled context: the matching residual of the closed-form
/// factor, and the truncated/untruncated form discrepancies computed with
/// the form-invariant factor. Out-of-regime comparisons yield NaN deltas.
inline LorentzSampleRow evaluate_lorentz_sample(const FrameContext& ctx, double c,
                                                double gamma_min) {
    LorentzSampleRow row;
    row.v_p = ctx.v_p;
    row.v_p_prime = ctx.v_p_prime;
    row.v_pf = ctx.v_pf;
    row.chi_slope = ctx.chi_slope;

    const double gp = gamma(ctx.v_p, c);
    const double gpp = gamma(ctx.v_p_prime, c);
    row.gamma_pf_kinematic = gamma_pf_kinematic(gp, ctx.chi_slope);
    row.gamma_pf_matching = gamma_pf_matching(ctx, c);
    row.residual_matching =
        matching_residual(ctx, row.gamma_pf_matching, c) / (gpp * gpp);

    row.in_truncated_regime = gp >= gamma_min;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        const double g_star = gamma_pf_form_invariant(ctx, c);
        const auto [a, b] = ab_factors(ctx, c);
        const double ref_trunc = expansion_interval(1.0, gpp, ctx.chi_slope_primed, c);
        const double trunc = expansion_interval(1.0, g_star * a, g_star * b, c);
        row.delta_truncated = std::abs(trunc - ref_trunc) / std::abs(ref_trunc);

        const double ref_full = interval_unprimed(1.0, gpp, ctx.chi_slope_primed, c);
        const double full = interval_primed(1.0, ctx, g_star, c);
        row.delta_full = std::abs(full - ref_full) / std::abs(ref_full);
    } catch (const OutOfRegime&) {
        row.delta_truncated = nan;
        row.delta_full = nan;
    }
    return row;
}

/// Seeded randomized sweep over frame contexts. Per-sample seeds are
/// base_seed + index, so the report is reproducible row by row.
inline LorentzCheckReport run_lorentz_check(const LorentzCheckConfig& config,
                                            const Constants& constants) {
    const double c = constants.c();
    LorentzCheckReport report;
    report.config = config;
    report.rows.reserve(config.samples);

    for (std::size_t i = 0; i < config.samples; ++i) {
        const std::uint64_t row_seed = config.seed + static_cast<std::uint64_t>(i);
        std::mt19937_64 eng(row_seed);
        const double v_p_prime = (2.0 * detail::uniform01(eng) - 1.0) * config.v_max_frac * c;
        const double v_pf = (2.0 * detail::uniform01(eng) - 1.0) * config.v_max_frac * c;
        const double slope = (2.0 * detail::uniform01(eng) - 1.0) * config.slope_max;

        const FrameContext ctx = make_frame_context(v_p_prime, v_pf, slope, c);
        LorentzSampleRow row = evaluate_lorentz_sample(ctx, c, config.gamma_min);
        row.seed = row_seed;

        report.max_residual = std::max(report.max_residual, std::abs(row.residual_matching));
        if (std::isnan(row.delta_truncated)) {
            ++report.out_of_regime_count;
        } else if (row.in_truncated_regime) {
            ++report.truncated_regime_count;
            report.max_delta_truncated =
                std::max(report.max_delta_truncated, row.delta_truncated);
            report.max_delta_full = std::max(report.max_delta_full, row.delta_full);
        }
        report.rows.push_back(row);
    }
    return report;
}

} // namespace pf
