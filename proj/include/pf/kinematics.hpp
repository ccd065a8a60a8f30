#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "pf/constants.hpp"
#include "pf/detail/quadrature.hpp"
#include "pf/errors.hpp"
#include "pf/field.hpp"

namespace pf {

/// Particle position, velocity and mass (rest mass in relativistic contexts).
struct ParticleState {
    double x = 0.0;
    double v_p = 0.0;
    double m = 1.0;

    void validate() const {
        if (!(m > 0.0))
            throw InvalidArgument("ParticleState: mass must be positive");
    }
};

/// One integrated trajectory: times, particle positions/velocities, the PF
/// arc-length position q per sample, and the per-sample particle energy.
struct TrajectoryRecord {
    std::vector<double> ts;
    std::vector<double> xs;
    std::vector<double> vs;
    std::vector<double> qs;
    std::vector<double> energy;
    bool domain_exit = false;
};

/// Field speed v_F = |chi'(x)| |v_p|.
inline double field_velocity(const ParticleState& state, const FieldProfile& profile) {
    return std::abs(profile.slope(state.x)) * std::abs(state.v_p);
}

/// Field force f_F = m v_p^2 d|chi'|/dx + |chi'| f_p, with the a.e. rule
/// for d|chi'|/dx (see FieldProfile::abs_slope_derivative).
inline double field_force(const ParticleState& state, double f_p, const FieldProfile& profile) {
    state.validate();
    const double s = profile.slope(state.x);
    return state.m * state.v_p * state.v_p * profile.abs_slope_derivative(state.x) +
           std::abs(s) * f_p;
}

inline constexpr double kArcLengthQuadTol = 1e-10;

/// PF position q(x) = g * integral from x_ref to x of sqrt(1 + chi'(u)^2) du.
/// The result carries the sign of (x - x_ref); absolute quadrature tolerance 1e-10.
inline double pf_position(double x, const FieldProfile& profile, const PFCoupling& g,
                          double x_ref) {
    if (!profile.contains(x) || !profile.contains(x_ref))
        throw DomainError("pf_position: [x_ref, x] must lie inside the profile domain");
    const auto integrand = [&profile](double u) {
        const double s = profile.slope(u);
        return std::sqrt(1.0 + s * s);
    };
    if (x >= x_ref)
        return g.value() * detail::integrate_adaptive(integrand, x_ref, x, kArcLengthQuadTol);
    return -g.value() * detail::integrate_adaptive(integrand, x, x_ref, kArcLengthQuadTol);
}

/// PF speed |q'| = g sqrt(v_p^2 + v_F^2).
inline double pf_speed(const ParticleState& state, const FieldProfile& profile,
                       const PFCoupling& g) {
    const double vf = field_velocity(state, profile);
    return g.value() * std::hypot(state.v_p, vf);
}

/// PF force f_PF = g [ f_p (1+chi'^2)^{1/2} + m v^2 chi' chi'' (1+chi'^2)^{-1/2} ].
inline double pf_force(const ParticleState& state, double f_p, const FieldProfile& profile,
                       const PFCoupling& g) {
    state.validate();
    const double s = profile.slope(state.x);
    const double c = profile.curvature(state.x);
    const double root = std::sqrt(1.0 + s * s);
    return g.value() * (f_p * root + state.m * state.v_p * state.v_p * s * c / root);
}

struct IntegrationOptions {
    /// Reference point for q; defaults to the profile's left domain edge.
    std::optional<double> x_ref;
    /// Potential energy V_p(x) for the energy column; kinetic-only if absent.
    std::function<double(double)> potential;
    /// Record every k-th step (the initial state is always recorded).
    std::size_t record_stride = 1;
};

/// Classical trajectory of m x'' = f_p(x) by fixed-step fourth-order
/// Runge-Kutta, with the PF position q accumulated along the way. Leaves
/// the field domain -> partial record with the domain_exit flag set.
inline TrajectoryRecord integrate_particle(const std::function<double(double)>& force_law,
                                           const ParticleState& state0, double dt,
                                           std::size_t n_steps, const FieldProfile& profile,
                                           const PFCoupling& g,
                                           const IntegrationOptions& opts = {}) {
    state0.validate();
    if (!(dt > 0.0))
        throw InvalidArgument("integrate_particle: dt must be positive");
    if (!profile.contains(state0.x))
        throw DomainError("integrate_particle: initial position outside the field domain");

    const double x_ref = opts.x_ref.value_or(profile.x_lo());
    if (!profile.contains(x_ref))
        throw DomainError("integrate_particle: x_ref outside the field domain");
    const std::size_t stride = opts.record_stride == 0 ? 1 : opts.record_stride;

    const auto arc = [&profile](double u) {
        const double s = profile.slope(u);
        return std::sqrt(1.0 + s * s);
    };
    const auto accel = [&](double x) { return force_law(x) / state0.m; };
    const auto sample_energy = [&](double x, double v) {
        const double kin = 0.5 * state0.m * v * v;
        return opts.potential ? kin + opts.potential(x) : kin;
    };

    TrajectoryRecord rec;
    double t = 0.0, x = state0.x, v = state0.v_p;
    // q accumulates per-step signed segment integrals; the quadrature is
    // additive over adjacent intervals, so this equals q(x_k) - q(x_ref).
    double q = pf_position(state0.x, profile, g, x_ref);

    const auto record = [&](double tt, double xx, double vv, double qq) {
        rec.ts.push_back(tt);
        rec.xs.push_back(xx);
        rec.vs.push_back(vv);
        rec.qs.push_back(qq);
        rec.energy.push_back(sample_energy(xx, vv));
    };
    record(t, x, v, q);

    for (std::size_t step = 1; step <= n_steps; ++step) {
        const double k1x = v;
        const double k1v = accel(x);
        const double k2x = v + 0.5 * dt * k1v;
        const double k2v = accel(x + 0.5 * dt * k1x);
        const double k3x = v + 0.5 * dt * k2v;
        const double k3v = accel(x + 0.5 * dt * k2x);
        const double k4x = v + dt * k3v;
        const double k4v = accel(x + dt * k3x);
        const double x_new = x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        const double v_new = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);

        if (!std::isfinite(x_new) || !std::isfinite(v_new))
            throw NumericalFailure("integrate_particle: state became non-finite");
        if (!profile.contains(x_new)) {
            rec.domain_exit = true;
            return rec;
        }

        double dq;
        if (x_new >= x)
            dq = detail::integrate_adaptive(arc, x, x_new, kArcLengthQuadTol);
        else
            dq = -detail::integrate_adaptive(arc, x_new, x, kArcLengthQuadTol);
        q += g.value() * dq;
        x = x_new;
        v = v_new;
        t = static_cast<double>(step) * dt;

        if (step % stride == 0 || step == n_steps)
            record(t, x, v, q);
    }
    return rec;
}

struct EnergyDecomposition {
    double K_p;     // particle kinetic energy
    double K_f;     // field kinetic energy K_p chi'^2
    double E_p;     // particle energy V_p + K_p
    double E_total; // V_p + K_p + E_f
};

/// Energy bookkeeping; the total field energy E_f is supplied by the caller
/// (its potential part has no general closed form).
inline EnergyDecomposition energy_decomposition(const ParticleState& state,
                                                const FieldProfile& profile, double V_p,
                                                double E_f) {
    state.validate();
    const double s = profile.slope(state.x);
    const double K_p = 0.5 * state.m * state.v_p * state.v_p;
    const double K_f = K_p * s * s;
    return {K_p, K_f, V_p + K_p, V_p + K_p + E_f};
}

} // namespace pf
