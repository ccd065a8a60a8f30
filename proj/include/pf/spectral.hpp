#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pf/constants.hpp"
#include "pf/detail/spline.hpp"
#include "pf/detail/tridiagonal.hpp"
#include "pf/errors.hpp"
#include "pf/field.hpp"
#include "pf/kinematics.hpp"
#include "pf/relativity.hpp"

namespace pf {

/// Non-relativistic particle potential V_nrP(x). Infinite walls are encoded
/// as Dirichlet boundaries of the problem domain, never as a large number.
class Potential {
public:
    enum class Kind { Zero, InfiniteBox, SampledGrid };

    static Potential zero() { return Potential(Kind::Zero); }

    static Potential infinite_box(double a) {
        if (!(a > 0.0))
            throw InvalidArgument("infinite_box: width must be positive");
        Potential p(Kind::InfiniteBox);
        p.a_ = a;
        return p;
    }

    static Potential sampled(std::vector<double> xs, std::vector<double> vs) {
        Potential p(Kind::SampledGrid);
        p.spline_ = detail::CubicSpline(std::move(xs), std::move(vs));
        return p;
    }

    Kind kind() const noexcept { return kind_; }
    double box_width() const noexcept { return a_; }

    double value(double x) const {
        switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::InfiniteBox:
            if (!(x >= 0.0 && x <= a_))
                throw DomainError("Potential: x outside the box");
            return 0.0;
        case Kind::SampledGrid:
            return spline_.value(x);
        }
        throw Error("Potential::value: unreachable");
    }

private:
    explicit Potential(Kind kind) : kind_(kind) {}
    Kind kind_;
    double a_ = 0.0;
    detail::CubicSpline spline_;
};

enum class EquationForm { MassDependent, MassIndependent };

/// A one-dimensional eigenproblem: domain with Dirichlet walls, rest mass,
/// potential, and which of the two equation forms to solve.
struct SpectralProblem {
    Potential potential = Potential::zero();
    double m0 = 1.0;
    EquationForm form = EquationForm::MassIndependent;
    double x_lo = 0.0;
    double x_hi = 1.0;

    static SpectralProblem box(double a, double m0, EquationForm form) {
        SpectralProblem p;
        p.potential = Potential::infinite_box(a);
        p.m0 = m0;
        p.form = form;
        p.x_lo = 0.0;
        p.x_hi = a;
        p.validate();
        return p;
    }

    void validate() const {
        if (!(x_lo < x_hi))
            throw InvalidArgument("SpectralProblem: empty domain");
        if (m0 < 0.0)
            throw InvalidArgument("SpectralProblem: m0 must be non-negative");
        if (form == EquationForm::MassDependent && !(m0 > 0.0))
            throw InvalidArgument("SpectralProblem: the mass-dependent form requires m0 > 0; "
                                  "photonic problems use the mass-independent form");
    }
};

struct SpectrumLevel {
    int n = 0;
    double energy = 0.0;
    int nodes = 0;
    FieldProfile eigenfield = FieldProfile::zero(0.0, 1.0);
};

struct SolverMeta {
    std::string backend;
    std::size_t grid_size = 0;
    std::vector<double> residuals;
    std::vector<std::array<double, 2>> brackets;
};

/// Ordered energy levels with their eigenfields on a grid.
struct Spectrum {
    std::vector<SpectrumLevel> levels;
    std::vector<double> grid;
    SolverMeta meta;

    void validate() const {
        for (std::size_t i = 0; i + 1 < levels.size(); ++i)
            if (!(levels[i].energy < levels[i + 1].energy))
                throw NumericalFailure("Spectrum: energies are not strictly increasing");
        for (const auto& level : levels)
            if (level.energy < 0.0)
                throw NumericalFailure("Spectrum: negative energy emitted");
    }
};

/// Relativistic field force f_rF = f_rP chi' + gamma_P m0 v_P^2 chi''.
inline double rel_field_force(const ParticleState& state, double f_rp,
                              const FieldProfile& profile, double c) {
    const double g = gamma(state.v_p, c);
    return f_rp * profile.slope(state.x) +
           g * state.m * state.v_p * state.v_p * profile.curvature(state.x);
}

/// How well a profile solves -hbar^2 chi'' = p^2 chi at momentum p:
/// max over the grid of |hbar^2 chi'' + p^2 chi| / max |p^2 chi|.
inline double oscillator_postulate_residual(const FieldProfile& profile, double p,
                                            double hbar,
                                            const std::vector<double>& grid) {
    if (grid.empty())
        throw InvalidArgument("oscillator_postulate_residual: empty grid");
    double num = 0.0, den = 0.0;
    for (double x : grid) {
        const double chi = profile.value(x);
        const double curv = profile.curvature(x);
        num = std::max(num, std::abs(hbar * hbar * curv + p * p * chi));
        den = std::max(den, std::abs(p * p * chi));
    }
    if (!(den > 0.0))
        throw InvalidArgument("oscillator_postulate_residual: residual undefined for an "
                              "identically zero profile");
    return num / den;
}

/// Squared momentum for a potential that multiplies the relativistic mass:
/// p^2 = (1 + V/(m0 c^2))^{-2} [E^2/c^2 - m0^2 c^2 (1 + V/(m0 c^2))^2].
/// May be negative in a classically forbidden region.
inline double momentum_sq_mass_dep(double E, double V, double m0, double c) {
    if (!(m0 > 0.0))
        throw InvalidArgument("momentum_sq_mass_dep: requires m0 > 0");
    const double w = 1.0 + V / (m0 * c * c);
    if (!(w > 0.0))
        throw OutOfRegime("momentum_sq_mass_dep: 1 + V/(m0 c^2) must stay positive", w);
    return (E * E / (c * c) - m0 * m0 * c * c * w * w) / (w * w);
}

/// Squared momentum for a mass-independent potential:
/// p^2 = (E - V)^2 / c^2 - m0^2 c^2. May be negative.
inline double momentum_sq_mass_indep(double E, double V, double m0, double c) {
    const double ev = (E - V) / c;
    return ev * ev - m0 * m0 * c * c;
}

/// Free photon energy E = h c / lambda.
inline double free_photon_energy(double wavelength, const Constants& constants) {
    if (!(wavelength > 0.0))
        throw InvalidArgument("free_photon_energy: wavelength must be positive");
    return constants.h() * constants.c() / wavelength;
}

/// Closed-form box spectrum E_n = c sqrt(n^2 h^2 / (4 a^2) + m0^2 c^2) with
/// eigenfields A sin(n pi x / a). The massless case reduces to E_n = n h c / (2a)
/// and is evaluated without the square root so it stays exact.
inline Spectrum solve_box_analytic(double m0, double a, int n_max,
                                   const Constants& constants, double amplitude = 1.0,
                                   std::size_t grid_points = 513) {
    if (!(a > 0.0) || n_max < 1 || m0 < 0.0)
        throw InvalidArgument("solve_box_analytic: need a > 0, n_max >= 1, m0 >= 0");
    const double c = constants.c();
    const double h = constants.h();

    Spectrum spec;
    spec.meta.backend = "analytic";
    spec.meta.grid_size = grid_points;
    spec.grid.resize(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i)
        spec.grid[i] = a * static_cast<double>(i) / static_cast<double>(grid_points - 1);

    for (int n = 1; n <= n_max; ++n) {
        const double half_wave = static_cast<double>(n) * h * c / (2.0 * a);
        const double rest = m0 * c * c;
        const double E = (m0 == 0.0) ? half_wave : std::sqrt(half_wave * half_wave + rest * rest);
        SpectrumLevel level;
        level.n = n;
        level.energy = E;
        level.nodes = n - 1;
        level.eigenfield = FieldProfile::box_eigenfield(n, a, amplitude);
        spec.levels.push_back(std::move(level));
        spec.meta.residuals.push_back(0.0);
    }
    spec.validate();
    return spec;
}

namespace detail {

inline double potential_at(const Potential& pot, double x) {
    return pot.value(x);
}

inline int count_sign_changes(const std::vector<double>& values, std::size_t first,
                              std::size_t last) {
    int count = 0;
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t i = first; i < last; ++i) {
        const double v = values[i];
        if (v == 0.0)
            continue;
        if (have_prev && ((prev > 0.0) != (v > 0.0)))
            ++count;
        prev = v;
        have_prev = true;
    }
    return count;
}

/// L^2-normalize on the grid (sum chi^2 h = 1) and make the first
/// appreciable interior value positive.
inline void normalize_eigenvector(std::vector<double>& chi, double h) {
    double norm2 = 0.0;
    for (double v : chi)
        norm2 += v * v;
    norm2 *= h;
    if (!(norm2 > 0.0))
        throw NumericalFailure("eigenfield normalization: zero norm");
    double peak = 0.0;
    for (double v : chi)
        peak = std::max(peak, std::abs(v));
    double lead = 0.0;
    for (double v : chi) {
        if (std::abs(v) > 1e-12 * peak) {
            lead = v;
            break;
        }
    }
    const double scale = (lead < 0.0 ? -1.0 : 1.0) / std::sqrt(norm2);
    for (double& v : chi)
        v *= scale;
}

} // namespace detail

/// Finite-difference eigensolver on a uniform grid (second-order central
/// stencil, Dirichlet walls). Both equation forms lead to
///   [-hbar^2 c^2 D2 + m0^2 c^4] chi = mu * W chi
/// with W = (1 + V/(m0 c^2))^{-2} and mu = E^2 for the mass-dependent form,
/// and W = I and mu = (E - V0)^2 for the mass-independent form, which this
/// back end accepts only with a constant potential (E enters non-linearly
/// otherwise; use solve_shooting there).
inline Spectrum solve_fd(const SpectralProblem& problem, std::size_t grid_size,
                         std::size_t n_levels, const Constants& constants) {
    problem.validate();
    if (grid_size < 64)
        throw InvalidArgument("solve_fd: grid_size must be at least 64");
    if (n_levels == 0 || n_levels > grid_size / 4)
        throw InvalidArgument("solve_fd: n_levels out of range for this grid");

    const double c = constants.c();
    const double hbar = constants.hbar();
    const double L = problem.x_hi - problem.x_lo;
    const double h = L / static_cast<double>(grid_size + 1);

    std::vector<double> x(grid_size), V(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        x[i] = problem.x_lo + h * static_cast<double>(i + 1);
        V[i] = detail::potential_at(problem.potential, x[i]);
    }

    double V0 = 0.0;
    std::vector<double> w_inv_sq; // W_i for the mass-dependent form
    if (problem.form == EquationForm::MassDependent) {
        w_inv_sq.resize(grid_size);
        for (std::size_t i = 0; i < grid_size; ++i) {
            const double w = 1.0 + V[i] / (problem.m0 * c * c);
            if (!(w > 0.0))
                throw OutOfRegime("solve_fd: 1 + V/(m0 c^2) not positive on the grid", w);
            w_inv_sq[i] = 1.0 / (w * w);
        }
    } else {
        const auto [vmin, vmax] = std::minmax_element(V.begin(), V.end());
        const double scale = std::max({std::abs(*vmin), std::abs(*vmax), 1.0});
        if (*vmax - *vmin > 1e-12 * scale)
            throw OutOfRegime("solve_fd: the mass-independent form needs a constant "
                              "potential here; use solve_shooting for general V",
                              *vmax - *vmin);
        V0 = V[0];
    }

    // Scaled operator entries; symmetric similarity with diagonal W keeps
    // the matrix tridiagonal.
    const double kin = hbar * hbar * c * c / (h * h);
    const double rest = problem.m0 * problem.m0 * std::pow(c, 4);
    std::vector<double> diag(grid_size), off(grid_size - 1);
    for (std::size_t i = 0; i < grid_size; ++i) {
        diag[i] = 2.0 * kin + rest;
        if (problem.form == EquationForm::MassDependent)
            diag[i] /= w_inv_sq[i];
    }
    for (std::size_t i = 0; i + 1 < grid_size; ++i) {
        off[i] = -kin;
        if (problem.form == EquationForm::MassDependent)
            off[i] /= std::sqrt(w_inv_sq[i] * w_inv_sq[i + 1]);
    }

    Spectrum spec;
    spec.meta.backend = "fd";
    spec.meta.grid_size = grid_size;
    spec.grid.resize(grid_size + 2);
    spec.grid.front() = problem.x_lo;
    spec.grid.back() = problem.x_hi;
    std::copy(x.begin(), x.end(), spec.grid.begin() + 1);

    for (std::size_t k = 0; k < n_levels; ++k) {
        const double mu = pf::detail::tridiag_eigenvalue(diag, off, k);
        if (!(mu >= 0.0))
            throw NumericalFailure("solve_fd: negative squared-energy eigenvalue");
        std::vector<double> y = pf::detail::tridiag_eigenvector(diag, off, mu);

        // Residual ||T y - mu y|| / mu before the back-transformation.
        double res = 0.0;
        for (std::size_t i = 0; i < grid_size; ++i) {
            double r = (diag[i] - mu) * y[i];
            if (i > 0)
                r += off[i - 1] * y[i - 1];
            if (i + 1 < grid_size)
                r += off[i] * y[i + 1];
            res += r * r;
        }
        spec.meta.residuals.push_back(std::sqrt(res) / mu);

        std::vector<double> chi(grid_size + 2, 0.0);
        for (std::size_t i = 0; i < grid_size; ++i) {
            chi[i + 1] = y[i];
            if (problem.form == EquationForm::MassDependent)
                chi[i + 1] /= std::sqrt(w_inv_sq[i]); // chi = W^{-1/2} y
        }
        detail::normalize_eigenvector(chi, h);

        SpectrumLevel level;
        level.n = static_cast<int>(k) + 1;
        level.energy = (problem.form == EquationForm::MassDependent)
                           ? std::sqrt(mu)
                           : V0 + std::sqrt(mu);
        level.nodes = detail::count_sign_changes(chi, 1, grid_size + 1);
        level.eigenfield = FieldProfile::sampled(spec.grid, chi);
        spec.levels.push_back(std::move(level));
    }
    spec.validate();
    return spec;
}

namespace detail {

struct ShootingResult {
    std::vector<double> chi; // values at the grid nodes, chi[0] = 0
    int interior_nodes = 0;
    double boundary_value = 0.0;
    double peak = 0.0;
};

/// Integrate chi'' = -[(E-V)^2/c^2 - m0^2 c^2] chi / hbar^2 across the
/// domain by fixed-step RK4 from chi(x_lo) = 0, chi'(x_lo) = 1.
inline ShootingResult shoot(const SpectralProblem& problem, double E,
                            const Constants& constants, std::size_t steps) {
    const double c = constants.c();
    const double hbar = constants.hbar();
    const double L = problem.x_hi - problem.x_lo;
    const double h = L / static_cast<double>(steps);
    const auto rhs = [&](double xx, double chi) {
        const double V = potential_at(problem.potential, std::clamp(xx, problem.x_lo, problem.x_hi));
        return -momentum_sq_mass_indep(E, V, problem.m0, c) * chi / (hbar * hbar);
    };

    ShootingResult out;
    out.chi.resize(steps + 1);
    double chi = 0.0, u = 1.0;
    out.chi[0] = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double xx = problem.x_lo + h * static_cast<double>(i);
        const double k1c = u;
        const double k1u = rhs(xx, chi);
        const double k2c = u + 0.5 * h * k1u;
        const double k2u = rhs(xx + 0.5 * h, chi + 0.5 * h * k1c);
        const double k3c = u + 0.5 * h * k2u;
        const double k3u = rhs(xx + 0.5 * h, chi + 0.5 * h * k2c);
        const double k4c = u + h * k3u;
        const double k4u = rhs(xx + h, chi + h * k3c);
        chi += h / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        if (!std::isfinite(chi) || !std::isfinite(u))
            throw NumericalFailure("solve_shooting: integration became non-finite");
        out.chi[i + 1] = chi;
        out.peak = std::max(out.peak, std::abs(chi));
    }
    out.boundary_value = chi;
    out.interior_nodes = count_sign_changes(out.chi, 1, steps);
    return out;
}

} // namespace detail

/// Shooting eigensolver for the mass-independent form with a general
/// potential. Levels are isolated by node-count bisection inside the energy
/// bracket, then the boundary residual chi(x_hi) is driven below tol by
/// bisection plus secant steps.
inline Spectrum solve_shooting(const SpectralProblem& problem,
                               std::array<double, 2> E_bracket, std::size_t n_target,
                               const Constants& constants, double tol = 1e-10,
                               std::size_t steps = 2000) {
    problem.validate();
    if (problem.form != EquationForm::MassIndependent)
        throw InvalidArgument("solve_shooting: only the mass-independent form is non-linear "
                              "in E; use solve_fd for the mass-dependent form");
    if (!(tol > 0.0))
        throw InvalidArgument("solve_shooting: tol must be positive");
    const double rest = problem.m0 * constants.c() * constants.c();
    if (!(E_bracket[0] > rest) || !(E_bracket[1] > E_bracket[0]))
        throw InvalidArgument("solve_shooting: bracket must lie inside (m0 c^2, inf)");
    if (n_target == 0)
        throw InvalidArgument("solve_shooting: n_target must be at least 1");

    const double L = problem.x_hi - problem.x_lo;
    const double h = L / static_cast<double>(steps);

    Spectrum spec;
    spec.meta.backend = "shooting";
    spec.meta.grid_size = steps + 1;
    spec.grid.resize(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        spec.grid[i] = problem.x_lo + h * static_cast<double>(i);
    spec.grid.back() = problem.x_hi;

    const auto nodes_at = [&](double E) {
        return detail::shoot(problem, E, constants, steps).interior_nodes;
    };

    for (std::size_t level_index = 1; level_index <= n_target; ++level_index) {
        // chi(x_hi; E) has its level-n zero inside the energy window where the
        // sampled interior node count equals n-1; locate that window first.
        const int want = static_cast<int>(level_index) - 1;
        if (nodes_at(E_bracket[0]) > want)
            throw LevelNotFound("solve_shooting: bracket lower edge already above level " +
                                std::to_string(level_index));

        // Lower window edge: just past the energy where the count reaches n-1.
        double w_lo = E_bracket[0];
        if (nodes_at(w_lo) < want) {
            double below = w_lo, above = E_bracket[1];
            if (nodes_at(above) < want)
                throw LevelNotFound("solve_shooting: bracket top is below level " +
                                    std::to_string(level_index));
            for (int it = 0; it < 120; ++it) {
                const double mid = 0.5 * (below + above);
                if (mid == below || mid == above)
                    break;
                if (nodes_at(mid) >= want)
                    above = mid;
                else
                    below = mid;
            }
            w_lo = above;
        }

        // Upper window edge: just before the count exceeds n-1.
        double w_hi = E_bracket[1];
        if (nodes_at(w_hi) > want) {
            double below = w_lo, above = w_hi;
            for (int it = 0; it < 120; ++it) {
                const double mid = 0.5 * (below + above);
                if (mid == below || mid == above)
                    break;
                if (nodes_at(mid) > want)
                    above = mid;
                else
                    below = mid;
            }
            w_hi = below;
        }
        if (nodes_at(w_lo) != want || nodes_at(w_hi) != want)
            throw LevelNotFound("solve_shooting: could not isolate level " +
                                std::to_string(level_index));

        double lo = w_lo, hi = w_hi;
        spec.meta.brackets.push_back({lo, hi});

        detail::ShootingResult at_lo = detail::shoot(problem, lo, constants, steps);
        detail::ShootingResult at_hi = detail::shoot(problem, hi, constants, steps);
        if (!(at_lo.boundary_value * at_hi.boundary_value <= 0.0))
            throw LevelNotFound("solve_shooting: no boundary sign change isolated for level " +
                                std::to_string(level_index));

        // Secant with a bisection fallback, driven by the boundary residual.
        double E = hi, f_lo = at_lo.boundary_value, f_hi = at_hi.boundary_value;
        detail::ShootingResult best = at_hi;
        std::size_t iterations = 0;
        while (std::abs(best.boundary_value) / best.peak > tol) {
            if (++iterations > 200)
                throw NumericalFailure("solve_shooting: residual refinement exceeded 200 "
                                       "iterations");
            double trial = E;
            if (f_hi != f_lo)
                trial = hi - f_hi * (hi - lo) / (f_hi - f_lo);
            if (!(trial > lo) || !(trial < hi))
                trial = 0.5 * (lo + hi);
            if (trial == lo || trial == hi)
                break; // bracket exhausted at double precision
            detail::ShootingResult at_trial = detail::shoot(problem, trial, constants, steps);
            if (at_lo.boundary_value * at_trial.boundary_value <= 0.0) {
                hi = trial;
                f_hi = at_trial.boundary_value;
            } else {
                lo = trial;
                f_lo = at_trial.boundary_value;
                at_lo = at_trial;
            }
            E = trial;
            best = std::move(at_trial);
        }

        // Zero the far wall exactly by removing a linear ramp; a ramp carries
        // no curvature, while stamping the endpoint alone would leave an
        // O(residual / h^2) kink at the last knot.
        std::vector<double> chi = best.chi;
        const double ramp = chi.back() / L;
        for (std::size_t i = 0; i <= steps; ++i)
            chi[i] -= ramp * (spec.grid[i] - problem.x_lo);
        chi.back() = 0.0;
        detail::normalize_eigenvector(chi, h);

        SpectrumLevel level;
        level.n = static_cast<int>(level_index);
        level.energy = E;
        level.nodes = detail::count_sign_changes(chi, 1, steps);
        level.eigenfield = FieldProfile::sampled(spec.grid, chi);
        spec.levels.push_back(std::move(level));
        spec.meta.residuals.push_back(std::abs(best.boundary_value) / best.peak);
    }
    spec.validate();
    return spec;
}

struct NonRelLimitRow {
    int n = 0;
    double excess = 0.0;    // E_n - m0 c^2
    double nonrel = 0.0;    // n^2 h^2 / (8 m0 a^2)
    double deviation = 0.0; // |excess - nonrel| / nonrel
    double bound = 0.0;     // leading correction estimate, excess / (2 m0 c^2)
};

struct NonRelLimitReport {
    double m0 = 0.0;
    double a = 0.0;
    std::vector<NonRelLimitRow> rows;
};

/// Per-level comparison of a box spectrum against the non-relativistic box
/// energies. The excess over the rest energy is evaluated from the box
/// dispersion as (n h c / 2a)^2 / (E_n + m0 c^2), which stays accurate when
/// E_n - m0 c^2 is many orders below m0 c^2.
inline NonRelLimitReport nonrel_limit_report(const Spectrum& spectrum, double m0, double a,
                                             const Constants& constants) {
    if (!(m0 > 0.0))
        throw InvalidArgument("nonrel_limit_report: not applicable to photonic spectra");
    if (!(a > 0.0))
        throw InvalidArgument("nonrel_limit_report: box width must be positive");
    const double c = constants.c();
    const double h = constants.h();

    NonRelLimitReport report;
    report.m0 = m0;
    report.a = a;
    for (const auto& level : spectrum.levels) {
        const double n = static_cast<double>(level.n);
        const double half_wave = n * h * c / (2.0 * a);
        NonRelLimitRow row;
        row.n = level.n;
        row.excess = half_wave * half_wave / (level.energy + m0 * c * c);
        row.nonrel = n * n * h * h / (8.0 * m0 * a * a);
        row.deviation = std::abs(row.excess - row.nonrel) / row.nonrel;
        row.bound = row.excess / (2.0 * m0 * c * c);
        report.rows.push_back(row);
    }
    return report;
}

} // namespace pf
