#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pf/spectral.hpp"

namespace {

constexpr double kPi = std::numbers::pi;
const pf::Constants kNat = pf::Constants::natural();

// Series oracle for the box excess over the rest energy, in long double:
// sqrt(n^2 + m0^2) - m0 evaluated without cancellation.
long double box_excess_oracle(int n, long double m0) {
    const long double nn = static_cast<long double>(n);
    return nn * nn / (std::sqrt(nn * nn + m0 * m0) + m0);
}

} // namespace

TEST_CASE("relativistic field force") {
    const pf::FieldProfile zero = pf::FieldProfile::zero(-1.0, 1.0);
    CHECK(pf::rel_field_force({0.0, 0.6, 1.0}, 3.0, zero, 1.0) == 0.0);

    // chi'' = 0: the slope term alone survives
    const auto lin = pf::FieldProfile::linear(1.0, -1.0, 1.0);
    CHECK(pf::rel_field_force({0.0, 0.6, 1.0}, 2.0, lin, 1.0) == doctest::Approx(2.0));

    // v -> 0 recovers the non-relativistic structure f_rp chi' + m0 v^2 chi''
    const auto sine = pf::FieldProfile::sine(0.5, 2.0, -10.0, 10.0);
    const double x = 0.4, v = 1e-6, m0 = 1.3, frp = 0.7;
    const double nonrel = frp * sine.slope(x) + m0 * v * v * sine.curvature(x);
    CHECK(pf::rel_field_force({x, v, m0}, frp, sine, 1.0) ==
          doctest::Approx(nonrel).epsilon(1e-9));
}

TEST_CASE("oscillator postulate residual") {
    std::vector<double> grid;
    for (int i = 0; i <= 256; ++i)
        grid.push_back(kPi * i / 256.0);

    SUBCASE("box eigenfields solve the oscillator equation at their momentum") {
        for (int n = 1; n <= 5; ++n) {
            const auto chi = pf::box_eigenfield(n, kPi);
            const double p = n * kPi * kNat.hbar() / kPi; // n pi hbar / a
            CHECK(pf::oscillator_postulate_residual(chi, p, kNat.hbar(), grid) <= 1e-10);
        }
    }
    SUBCASE("a wrong momentum is loudly inconsistent") {
        const auto chi = pf::box_eigenfield(1, kPi);
        const double p2 = 2.0 * kPi * kNat.hbar() / kPi;
        const double r = pf::oscillator_postulate_residual(chi, p2, kNat.hbar(), grid);
        CHECK(r > 0.5);
        CHECK(r == doctest::Approx(0.75).epsilon(1e-10)); // |p2^2 - p1^2| / p2^2
    }
    SUBCASE("identically zero profiles have no defined residual") {
        const pf::FieldProfile zero = pf::FieldProfile::zero(0.0, kPi);
        CHECK_THROWS_AS(pf::oscillator_postulate_residual(zero, 1.0, 1.0, grid),
                        pf::InvalidArgument);
    }
}

TEST_CASE("squared-momentum relations") {
    SUBCASE("mass-dependent form") {
        CHECK(pf::momentum_sq_mass_dep(2.0, 0.0, 1.0, 1.0) == doctest::Approx(3.0));
        CHECK(pf::momentum_sq_mass_dep(2.0, 0.5, 1.0, 1.0) ==
              doctest::Approx(7.0 / 9.0).epsilon(1e-14));
        // turning point: E = m0 c^2 (1 + V/(m0 c^2))
        CHECK(pf::momentum_sq_mass_dep(1.5, 0.5, 1.0, 1.0) == doctest::Approx(0.0));
        CHECK_THROWS_AS(pf::momentum_sq_mass_dep(1.0, -2.0, 1.0, 1.0), pf::OutOfRegime);
        CHECK_THROWS_AS(pf::momentum_sq_mass_dep(1.0, 0.0, 0.0, 1.0), pf::InvalidArgument);
    }
    SUBCASE("mass-independent form") {
        CHECK(pf::momentum_sq_mass_indep(1.0, 0.0, 1.0, 1.0) == 0.0); // rest energy
        CHECK(pf::momentum_sq_mass_indep(2.0, 0.5, 1.0, 1.0) == doctest::Approx(1.25));
        CHECK(pf::momentum_sq_mass_indep(2.0, 0.5, 0.0, 1.0) ==
              doctest::Approx(2.25)); // photonic
        // classically forbidden regions may return negative values
        CHECK(pf::momentum_sq_mass_indep(1.1, 0.0, 2.0, 1.0) < 0.0);
    }
    SUBCASE("the two forms coincide at V = 0") {
        for (double E : {1.1, 2.0, 5.5})
            CHECK(pf::momentum_sq_mass_dep(E, 0.0, 1.0, 1.0) ==
                  doctest::Approx(pf::momentum_sq_mass_indep(E, 0.0, 1.0, 1.0)));
    }
}

TEST_CASE("analytic box spectrum") {
    SUBCASE("massive levels sqrt(n^2 + 1)") {
        const auto spec = pf::solve_box_analytic(1.0, kPi, 3, kNat);
        REQUIRE(spec.levels.size() == 3);
        CHECK(spec.levels[0].energy == doctest::Approx(1.4142136).epsilon(1e-7));
        CHECK(spec.levels[1].energy == doctest::Approx(2.2360680).epsilon(1e-7));
        CHECK(spec.levels[2].energy == doctest::Approx(3.1622777).epsilon(1e-7));
        for (int n = 1; n <= 3; ++n) {
            CHECK(spec.levels[n - 1].n == n); // spectrum starts at n = 1
            CHECK(spec.levels[n - 1].nodes == n - 1);
        }
    }
    SUBCASE("photonic levels are exactly n h c / (2a)") {
        const auto spec = pf::solve_box_analytic(0.0, kPi, 4, kNat);
        for (int n = 1; n <= 4; ++n)
            CHECK(spec.levels[n - 1].energy == static_cast<double>(n));
    }
    SUBCASE("eigenfields carry the requested amplitude and boundary zeros") {
        const auto spec = pf::solve_box_analytic(1.0, kPi, 2, kNat, 2.0);
        CHECK(spec.levels[0].eigenfield.value(kPi / 2.0) == 2.0);
        CHECK(spec.levels[0].eigenfield.value(0.0) == 0.0);
        CHECK(spec.levels[0].eigenfield.value(kPi) == 0.0);
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(pf::solve_box_analytic(1.0, 0.0, 3, kNat), pf::InvalidArgument);
        CHECK_THROWS_AS(pf::solve_box_analytic(1.0, kPi, 0, kNat), pf::InvalidArgument);
        CHECK_THROWS_AS(pf::solve_box_analytic(-1.0, kPi, 3, kNat), pf::InvalidArgument);
    }
}

TEST_CASE("finite-difference solver on the box") {
    const auto problem = pf::SpectralProblem::box(kPi, 1.0, pf::EquationForm::MassIndependent);
    const auto spec = pf::solve_fd(problem, 1200, 5, kNat);
    const auto exact = pf::solve_box_analytic(1.0, kPi, 5, kNat);
    for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(spec.levels[i].energy - exact.levels[i].energy) /
                  exact.levels[i].energy <
              1e-5);
        CHECK(spec.levels[i].nodes == i);
        CHECK(spec.levels[i].energy >= 1.0); // never below m0 c^2
        // Dirichlet walls are exact zeros of the stored eigenfield
        CHECK(spec.levels[i].eigenfield.value(0.0) == 0.0);
        CHECK(spec.levels[i].eigenfield.value(kPi) == 0.0);
    }
}

TEST_CASE("both equation forms agree on the box") {
    const auto dep =
        pf::solve_fd(pf::SpectralProblem::box(kPi, 1.0, pf::EquationForm::MassDependent),
                     600, 4, kNat);
    const auto indep =
        pf::solve_fd(pf::SpectralProblem::box(kPi, 1.0, pf::EquationForm::MassIndependent),
                     600, 4, kNat);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(dep.levels[i].energy - indep.levels[i].energy) /
                  indep.levels[i].energy <=
              1e-10);
}

TEST_CASE("finite-difference eigenvalues converge at second order") {
    const auto problem = pf::SpectralProblem::box(kPi, 1.0, pf::EquationForm::MassIndependent);
    const double exact = std::sqrt(2.0);
    // interior sizes chosen so the spacing halves exactly
    const double e1 =
        std::abs(pf::solve_fd(problem, 999, 1, kNat).levels[0].energy - exact);
    const double e2 =
        std::abs(pf::solve_fd(problem, 1999, 1, kNat).levels[0].energy - exact);
    const double factor = e1 / e2;
    CHECK(factor > 3.5);
    CHECK(factor < 4.5);
}

TEST_CASE("finite-difference eigenfields are orthonormal on the grid") {
    const auto problem = pf::SpectralProblem::box(kPi, 1.0, pf::EquationForm::MassIndependent);
    const auto spec = pf::solve_fd(problem, 800, 4, kNat);
    const double h = kPi / 801.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            double dot = 0.0;
            for (double x : spec.grid)
                dot += spec.levels[i].eigenfield.value(x) * spec.levels[j].eigenfield.value(x);
            dot *= h;
            if (i == j)
                CHECK(dot == doctest::Approx(1.0).epsilon(1e-10));
            else
                CHECK(std::abs(dot) <= 1e-8);
        }
    }
}

TEST_CASE("finite-difference solver guards its regime") {
    // mass-independent with a non-constant potential is non-linear in E
    std::vector<double> xs, vs;
    for (int i = 0; i <= 32; ++i) {
        xs.push_back(kPi * i / 32.0);
        vs.push_back(0.3 * std::sin(xs.back()));
    }
    pf::SpectralProblem varying;
    varying.potential = pf::Potential::sampled(xs, vs);
    varying.m0 = 1.0;
    varying.form = pf::EquationForm::MassIndependent;
    varying.x_lo = 0.0;
    varying.x_hi = kPi;
    CHECK_THROWS_AS(pf::solve_fd(varying, 128, 2, kNat), pf::OutOfRegime);

    // mass-dependent demands 1 + V/(m0 c^2) > 0 everywhere
    pf::SpectralProblem sick = varying;
    sick.form = pf::EquationForm::MassDependent;
    for (auto& v : vs)
        v = -2.0;
    sick.potential = pf::Potential::sampled(xs, vs);
    CHECK_THROWS_AS(pf::solve_fd(sick, 128, 2, kNat), pf::OutOfRegime);

    // basic argument checks
    const auto box = pf::SpectralProblem::box(kPi, 1.0, pf::EquationForm::MassIndependent);
    CHECK_THROWS_AS(pf::solve_fd(box, 32, 2, kNat), pf::InvalidArgument);
    CHECK_THROWS_AS(pf::SpectralProblem::box(kPi, 0.0, pf::EquationForm::MassDependent),
                    pf::InvalidArgument);
}

TEST_CASE("mass-dependent solver handles a genuinely varying potential") {
    // weak cosine well inside the box; check against second-order convergence
    // of the solver itself rather than a closed form.
    std::vector<double> xs, vs;
    for (int i = 0; i <= 64; ++i) {
        xs.push_back(kPi * i / 64.0);
        vs.push_back(0.2 * std::cos(xs.back()));
    }
    pf::SpectralProblem problem;
    problem.potential = pf::Potential::sampled(xs, vs);
    problem.m0 = 1.0;
    problem.form = pf::EquationForm::MassDependent;
    problem.x_lo = 0.0;
    problem.x_hi = kPi;

    const auto coarse = pf::solve_fd(problem, 500, 2, kNat);
    const auto fine = pf::solve_fd(problem, 2000, 2, kNat);
    for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(coarse.levels[i].energy - fine.levels[i].energy) <
              1e-5 * fine.levels[i].energy);
        CHECK(fine.levels[i].nodes == i);
    }
    CHECK(fine.levels[0].energy < fine.levels[1].energy);
}

TEST_CASE("shooting solver on the box") {
    const auto problem = pf::SpectralProblem::box(kPi, 1.0, pf::EquationForm::MassIndependent);
    const auto spec = pf::solve_shooting(problem, {1.0 + 1e-9, 8.0}, 5, kNat);
    const auto exact = pf::solve_box_analytic(1.0, kPi, 5, kNat);
    for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(spec.levels[i].energy - exact.levels[i].energy) /
                  exact.levels[i].energy <=
              1e-8);
        CHECK(spec.levels[i].nodes == i);
        CHECK(spec.levels[i].eigenfield.value(0.0) == 0.0);
        CHECK(spec.levels[i].eigenfield.value(kPi) == 0.0);
    }
    CHECK(spec.meta.brackets.size() == 5);
    for (double r : spec.meta.residuals)
        CHECK(r <= 1e-10);
}

TEST_CASE("shooting solver: photonic box") {
    pf::SpectralProblem problem =
        pf::SpectralProblem::box(kPi, 0.0, pf::EquationForm::MassIndependent);
    const auto spec = pf::solve_shooting(problem, {1e-3, 5.5}, 4, kNat);
    for (int n = 1; n <= 4; ++n)
        CHECK(std::abs(spec.levels[n - 1].energy - n) <= 1e-8 * n);
}

TEST_CASE("constant potential shifts every shooting level exactly") {
    const double v0 = 0.5;
    std::vector<double> xs, vs;
    for (int i = 0; i <= 16; ++i) {
        xs.push_back(kPi * i / 16.0);
        vs.push_back(v0);
    }
    pf::SpectralProblem shifted;
    shifted.potential = pf::Potential::sampled(xs, vs);
    shifted.m0 = 1.0;
    shifted.form = pf::EquationForm::MassIndependent;
    shifted.x_lo = 0.0;
    shifted.x_hi = kPi;

    const auto base = pf::solve_shooting(
        pf::SpectralProblem::box(kPi, 1.0, pf::EquationForm::MassIndependent),
        {1.0 + 1e-9, 6.0}, 3, kNat);
    const auto moved = pf::solve_shooting(shifted, {1.0 + v0 + 1e-9, 6.0 + v0}, 3, kNat);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(moved.levels[i].energy - base.levels[i].energy - v0) <= 1e-8);
}

TEST_CASE("shooting solver error paths") {
    const auto problem = pf::SpectralProblem::box(kPi, 1.0, pf::EquationForm::MassIndependent);
    // mass-dependent form is out of scope for this back end
    const auto dep = pf::SpectralProblem::box(kPi, 1.0, pf::EquationForm::MassDependent);
    CHECK_THROWS_AS(pf::solve_shooting(dep, {1.1, 5.0}, 1, kNat), pf::InvalidArgument);
    // bracket below the rest energy
    CHECK_THROWS_AS(pf::solve_shooting(problem, {0.5, 5.0}, 1, kNat), pf::InvalidArgument);
    // bracket that tops out below the requested level
    CHECK_THROWS_AS(pf::solve_shooting(problem, {1.0 + 1e-9, 1.2}, 1, kNat),
                    pf::LevelNotFound);
    // bracket that starts above the requested level
    CHECK_THROWS_AS(pf::solve_shooting(problem, {3.0, 8.0}, 1, kNat), pf::LevelNotFound);
}

TEST_CASE("postulate consistency of computed eigenfields") {
    // Grid-sampled eigenfields carry an O(h^2 k^2) curvature error, so the
    // stated thresholds need grids sized to the highest mode under test.
    SUBCASE("analytic eigenfields at 1e-10") {
        std::vector<double> grid;
        for (int i = 0; i <= 400; ++i)
            grid.push_back(kPi * i / 400.0);
        const auto spec = pf::solve_box_analytic(1.0, kPi, 5, kNat);
        for (const auto& level : spec.levels) {
            const double p2 = pf::momentum_sq_mass_indep(level.energy, 0.0, 1.0, 1.0);
            CHECK(pf::oscillator_postulate_residual(level.eigenfield, std::sqrt(p2),
                                                    kNat.hbar(), grid) <= 1e-10);
        }
    }
    SUBCASE("finite-difference eigenfields at 1e-6") {
        const auto problem =
            pf::SpectralProblem::box(kPi, 1.0, pf::EquationForm::MassIndependent);
        const auto spec = pf::solve_fd(problem, 8000, 5, kNat);
        for (const auto& level : spec.levels) {
            const double p2 = pf::momentum_sq_mass_indep(level.energy, 0.0, 1.0, 1.0);
            CHECK(pf::oscillator_postulate_residual(level.eigenfield, std::sqrt(p2),
                                                    kNat.hbar(), spec.grid) <= 1e-6);
        }
    }
    SUBCASE("shooting eigenfields at 1e-6") {
        const auto problem =
            pf::SpectralProblem::box(kPi, 1.0, pf::EquationForm::MassIndependent);
        const auto spec = pf::solve_shooting(problem, {1.0 + 1e-9, 8.0}, 5, kNat, 1e-10, 8000);
        for (const auto& level : spec.levels) {
            const double p2 = pf::momentum_sq_mass_indep(level.energy, 0.0, 1.0, 1.0);
            CHECK(pf::oscillator_postulate_residual(level.eigenfield, std::sqrt(p2),
                                                    kNat.hbar(), spec.grid) <= 1e-6);
        }
    }
}

TEST_CASE("free photon energy") {
    CHECK(pf::free_photon_energy(2.0 * kPi, kNat) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(pf::free_photon_energy(0.0, kNat), pf::InvalidArgument);
    CHECK_THROWS_AS(pf::free_photon_energy(-1.0, kNat), pf::InvalidArgument);
    // doubling the wavelength exactly halves the energy
    for (double lambda : {0.5, 1.0, 3.7})
        CHECK(pf::free_photon_energy(2.0 * lambda, kNat) ==
              pf::free_photon_energy(lambda, kNat) / 2.0);
    // monotone decay toward zero
    double prev = pf::free_photon_energy(1.0, kNat);
    for (double lambda : {10.0, 100.0, 1000.0}) {
        const double e = pf::free_photon_energy(lambda, kNat);
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("non-relativistic limit report") {
    SUBCASE("values against the series oracle") {
        for (double m0 : {1e2, 1e3, 1e4}) {
            const auto spec = pf::solve_box_analytic(m0, kPi, 2, kNat);
            const auto report = pf::nonrel_limit_report(spec, m0, kPi, kNat);
            for (const auto& row : report.rows) {
                const long double excess = box_excess_oracle(row.n, m0);
                const long double nonrel = row.n * row.n / (2.0L * m0);
                const long double dev = std::abs(excess - nonrel) / nonrel;
                CHECK(row.excess ==
                      doctest::Approx(static_cast<double>(excess)).epsilon(1e-12));
                CHECK(row.deviation ==
                      doctest::Approx(static_cast<double>(dev)).epsilon(1e-4));
                CHECK(row.deviation <= row.n * row.n / (m0 * m0));
                CHECK(row.bound == doctest::Approx(row.excess / (2.0 * m0)).epsilon(1e-12));
            }
        }
    }
    SUBCASE("deviation grows like n^2 at fixed mass") {
        const auto spec = pf::solve_box_analytic(1e3, kPi, 2, kNat);
        const auto report = pf::nonrel_limit_report(spec, 1e3, kPi, kNat);
        const double ratio = report.rows[1].deviation / report.rows[0].deviation;
        CHECK(ratio > 3.8);
        CHECK(ratio < 4.2);
    }
    SUBCASE("deviation falls monotonically as m0 grows") {
        double prev = 1.0;
        for (double m0 : {1e2, 1e3, 1e4}) {
            const auto spec = pf::solve_box_analytic(m0, kPi, 1, kNat);
            const auto report = pf::nonrel_limit_report(spec, m0, kPi, kNat);
            CHECK(report.rows[0].deviation < prev);
            prev = report.rows[0].deviation;
        }
    }
    SUBCASE("photonic spectra are rejected") {
        const auto spec = pf::solve_box_analytic(0.0, kPi, 1, kNat);
        CHECK_THROWS_AS(pf::nonrel_limit_report(spec, 0.0, kPi, kNat), pf::InvalidArgument);
    }
}
