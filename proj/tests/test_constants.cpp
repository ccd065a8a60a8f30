#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pf/constants.hpp"

TEST_CASE("natural units fix c = hbar = 1 and h = 2 pi") {
    const auto k = pf::make_constants(pf::UnitSystem::Natural);
    CHECK(k.c() == 1.0);
    CHECK(k.hbar() == 1.0);
    CHECK(k.h() == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-15));
    CHECK(k.system() == pf::UnitSystem::Natural);
}

TEST_CASE("SI constants carry the CODATA values with h = 2 pi hbar") {
    const auto k = pf::make_constants(pf::UnitSystem::SI);
    CHECK(k.c() == 2.99792458e8);
    CHECK(k.hbar() == 1.054571817e-34);
    // h/hbar = 2 pi to machine precision
    CHECK(std::abs(k.h() / k.hbar() - 2.0 * std::numbers::pi) <
          1e-15 * 2.0 * std::numbers::pi);
    // sanity: the derived h is the CODATA Planck constant
    CHECK(k.h() == doctest::Approx(6.62607015e-34).epsilon(1e-9));
}

TEST_CASE("h / hbar = 2 pi for any constructed record") {
    for (double hbar : {1e-40, 1.0, 3.5, 1e6}) {
        const auto k = pf::make_constants(pf::UnitSystem::SI, std::nullopt, hbar);
        CHECK(std::abs(k.h() / k.hbar() - 2.0 * std::numbers::pi) <
              1e-15 * 2.0 * std::numbers::pi);
    }
}

TEST_CASE("natural mode ignores overrides; SI honors them") {
    const auto nat = pf::make_constants(pf::UnitSystem::Natural, 3.0, 7.0);
    CHECK(nat.c() == 1.0);
    CHECK(nat.hbar() == 1.0);
    const auto si = pf::make_constants(pf::UnitSystem::SI, 3.0e8, std::nullopt);
    CHECK(si.c() == 3.0e8);
    CHECK(si.hbar() == 1.054571817e-34);
}

TEST_CASE("non-positive overrides are rejected") {
    CHECK_THROWS_AS(pf::make_constants(pf::UnitSystem::SI, -1.0, std::nullopt),
                    pf::InvalidArgument);
    CHECK_THROWS_AS(pf::make_constants(pf::UnitSystem::SI, std::nullopt, 0.0),
                    pf::InvalidArgument);
}

TEST_CASE("PF coupling defaults to one and must stay positive") {
    CHECK(pf::PFCoupling().value() == 1.0);
    CHECK(pf::PFCoupling(2.5).value() == 2.5);
    CHECK_THROWS_AS(pf::PFCoupling(0.0), pf::InvalidArgument);
    CHECK_THROWS_AS(pf::PFCoupling(-1.0), pf::InvalidArgument);
}
