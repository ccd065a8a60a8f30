#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "pf/field.hpp"

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace

TEST_CASE("linear profile: constant slope, zero curvature") {
    const auto p = pf::FieldProfile::linear(1.0, -1.0, 1.0);
    CHECK(p.evaluate(0.3, 1) == 1.0);
    CHECK(p.evaluate(0.3, 2) == 0.0);
    CHECK(p.evaluate(0.25, 0) == doctest::Approx(0.25));
}

TEST_CASE("box eigenfield values at distinguished points") {
    // antinode of the ground mode
    CHECK(pf::box_eigenfield(1, kPi, 1.0).value(kPi / 2.0) == 1.0);
    // boundary condition, exact zeros
    CHECK(pf::box_eigenfield(1, kPi, 1.0).value(0.0) == 0.0);
    CHECK(pf::box_eigenfield(1, kPi, 1.0).value(kPi) == 0.0);
    // interior node of sin(2 pi x) on [0, 1]
    CHECK(pf::box_eigenfield(2, 1.0, 1.0).value(0.5) == 0.0);
    // direct evaluation: 2 sin(pi/2)
    CHECK(pf::box_eigenfield(3, kPi, 2.0).value(kPi / 6.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("box eigenfield walls are exactly zero for every mode") {
    for (int n = 1; n <= 7; ++n) {
        const auto p = pf::box_eigenfield(n, kPi, 1.3);
        CHECK(p.value(0.0) == 0.0);
        CHECK(p.value(kPi) == 0.0);
    }
}

TEST_CASE("box eigenfield argument validation") {
    CHECK_THROWS_AS(pf::box_eigenfield(0, 1.0), pf::InvalidArgument);
    CHECK_THROWS_AS(pf::box_eigenfield(1, 0.0), pf::InvalidArgument);
    CHECK_THROWS_AS(pf::box_eigenfield(1, -2.0), pf::InvalidArgument);
}

TEST_CASE("sine profile: closed-form second derivative") {
    const auto p = pf::FieldProfile::sine(0.01, 2.0, -10.0, 10.0);
    for (double x : {0.3, 1.1, -2.7, 5.0})
        CHECK(p.curvature(x) == doctest::Approx(-0.04 * std::sin(2.0 * x)).epsilon(1e-14));
}

TEST_CASE("analytic derivatives agree with central differences at step 1e-5") {
    // The reference evaluates the analytic formula in long double, so the
    // second difference is not drowned by double rounding of chi itself.
    const long double h = 1e-5L;
    struct Case {
        pf::FieldProfile profile;
        long double amp;
        long double k;
    };
    const Case cases[] = {
        {pf::FieldProfile::sine(0.01, 2.0, -10.0, 10.0), 0.01L, 2.0L},
        {pf::FieldProfile::sine(1.0, 1.0, -10.0, 10.0), 1.0L, 1.0L},
        {pf::box_eigenfield(3, kPi, 0.5), 0.5L, 3.0L},
    };
    for (const auto& c : cases) {
        for (double x : {0.337, 0.91, 1.73}) { // away from zeros of sin and cos
            const auto f = [&](long double u) { return c.amp * std::sin(c.k * u); };
            const long double d1 = (f(x + h) - f(x - h)) / (2.0L * h);
            const long double d2 = (f(x + h) - 2.0L * f(x) + f(x - h)) / (h * h);
            CHECK(c.profile.slope(x) ==
                  doctest::Approx(static_cast<double>(d1)).epsilon(1e-6));
            CHECK(c.profile.curvature(x) ==
                  doctest::Approx(static_cast<double>(d2)).epsilon(1e-6));
        }
    }
}

TEST_CASE("sampled profile reproduces its analytic source") {
    // Full-period sine: the true curvature vanishes at both ends, matching
    // the natural spline end conditions.
    const auto source = pf::box_eigenfield(2, kPi, 0.5);
    const std::size_t n = 400;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = kPi * static_cast<double>(i) / static_cast<double>(n - 1);
        ys[i] = source.value(xs[i]);
    }
    const auto sampled = pf::FieldProfile::sampled(xs, ys);

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> interior(0.05, kPi - 0.05);
    for (int i = 0; i < 100; ++i) {
        const double x = interior(rng);
        CHECK(sampled.value(x) == doctest::Approx(source.value(x)).epsilon(1e-8));
        CHECK(std::abs(sampled.slope(x) - source.slope(x)) < 1e-5);
    }
}

TEST_CASE("evaluation is never an extrapolation") {
    const auto p = pf::box_eigenfield(1, kPi);
    CHECK_THROWS_AS(p.value(-0.1), pf::DomainError);
    CHECK_THROWS_AS(p.value(kPi + 0.1), pf::DomainError);
    const auto s = pf::FieldProfile::sampled({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 0.0, -1.0});
    CHECK_THROWS_AS(s.value(3.0001), pf::DomainError);
}

TEST_CASE("only derivative orders 0..2 are supported") {
    const auto p = pf::FieldProfile::linear(1.0, 0.0, 1.0);
    CHECK_THROWS_AS(p.evaluate(0.5, 3), pf::InvalidArgument);
    CHECK_THROWS_AS(p.evaluate(0.5, -1), pf::InvalidArgument);
}

TEST_CASE("sampled profile input validation") {
    CHECK_THROWS_AS(pf::FieldProfile::sampled({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}),
                    pf::InvalidArgument); // too few points
    CHECK_THROWS_AS(pf::FieldProfile::sampled({0.0, 1.0, 1.0, 2.0}, {0.0, 1.0, 1.0, 0.0}),
                    pf::InvalidArgument); // not strictly increasing
    CHECK_THROWS_AS(
        pf::FieldProfile::sampled({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, std::nan(""), 0.0}),
        pf::InvalidArgument); // non-finite value
}

TEST_CASE("field CSV ingestion") {
    SUBCASE("with header") {
        std::istringstream in("x,chi\n0,0\n0.5,0.1\n1.0,0.15\n1.5,0.1\n2.0,0\n");
        const auto p = pf::FieldProfile::from_csv(in);
        CHECK(p.x_lo() == 0.0);
        CHECK(p.x_hi() == 2.0);
        CHECK(p.value(1.0) == doctest::Approx(0.15));
    }
    SUBCASE("without header") {
        std::istringstream in("0,0\n1,1\n2,4\n3,9\n");
        const auto p = pf::FieldProfile::from_csv(in);
        CHECK(p.value(2.0) == doctest::Approx(4.0));
    }
    SUBCASE("non-increasing x is rejected") {
        std::istringstream in("0,0\n1,1\n1,2\n3,9\n");
        CHECK_THROWS_AS(pf::FieldProfile::from_csv(in), pf::InvalidArgument);
    }
    SUBCASE("malformed body row is rejected") {
        std::istringstream in("0,0\n1,1\nbroken,row\n3,9\n");
        CHECK_THROWS_AS(pf::FieldProfile::from_csv(in), pf::InvalidArgument);
    }
}

TEST_CASE("d|chi'|/dx follows the sign rule and vanishes at slope zeros") {
    const auto p = pf::FieldProfile::sine(1.0, 1.0, -10.0, 10.0);
    // chi' = cos(x) > 0 at x = 0.5: d|chi'|/dx = chi''
    CHECK(p.abs_slope_derivative(0.5) == p.curvature(0.5));
    // chi' < 0 at x = 2.0: d|chi'|/dx = -chi''
    CHECK(p.abs_slope_derivative(2.0) == -p.curvature(2.0));
    // exactly zero where chi' = 0 (antinode of the box mode)
    const auto box = pf::box_eigenfield(1, kPi);
    CHECK(box.slope(kPi / 2.0) == 0.0);
    CHECK(box.abs_slope_derivative(kPi / 2.0) == 0.0);
}
