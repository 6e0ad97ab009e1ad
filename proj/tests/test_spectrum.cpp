#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "natanzon/params.hpp"
#include "natanzon/spectrum.hpp"

using namespace natanzon;

TEST_CASE("group parameters from the energy", "[spectrum]") {
    const NatanzonParams pt2 = preset_pt2(4.5, 1.5, 1.0);
    const auto abd = abd_of_energy(pt2, 0.0);
    REQUIRE(abd.has_value());
    CHECK(abd->alpha == Catch::Approx(5.0).epsilon(1e-14));
    CHECK(abd->beta == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(abd->delta == Catch::Approx(3.0).epsilon(1e-14));

    const NatanzonParams rm = preset_rm(3.0, 2.0, 1.0);
    const auto rabd = abd_of_energy(rm, 0.0);
    REQUIRE(rabd.has_value());
    CHECK(rabd->alpha == Catch::Approx(7.0).epsilon(1e-14));
    CHECK(rabd->beta == Catch::Approx(7.0 / 3.0).epsilon(1e-14));
    CHECK(rabd->delta == Catch::Approx(11.0 / 3.0).epsilon(1e-14));
    CHECK(rabd->alpha - rabd->beta - rabd->delta == Catch::Approx(1.0).epsilon(1e-12));

    // Boundary of the discrete region: the delta radicand vanishes.
    const auto edge = abd_of_energy(pt2, 9.0);
    REQUIRE(edge.has_value());
    CHECK(edge->delta == 0.0);

    // Past it the radicand is negative.
    CHECK_FALSE(abd_of_energy(pt2, 10.0).has_value());
}

TEST_CASE("pt2 spectrum against the closed form", "[spectrum]") {
    const NatanzonParams p = preset_pt2(4.5, 1.5, 1.0);
    const auto levels = enumerate_levels(p);
    REQUIRE(levels.size() == 2);
    for (const Level& lev : levels) {
        const double closed = 4.0 * lev.nu * (3.0 - lev.nu);
        CHECK(lev.E == Catch::Approx(closed).margin(1e-10));
    }
    CHECK(levels[0].E == Catch::Approx(0.0).margin(1e-10));
    CHECK(levels[1].E == Catch::Approx(8.0).margin(1e-10));
    CHECK(levels[1].alpha == Catch::Approx(5.0).epsilon(1e-12));
    CHECK(levels[1].beta == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(levels[1].delta == Catch::Approx(1.0).epsilon(1e-12));

    // nu = 2 would need delta = -1: no bound state.
    CHECK_FALSE(solve_level(p, 2).has_value());
}

TEST_CASE("rm spectrum against the closed form", "[spectrum]") {
    const NatanzonParams p = preset_rm(3.0, 2.0, 1.0);
    const auto levels = enumerate_levels(p);
    REQUIRE(levels.size() == 2);
    CHECK(levels[0].E == Catch::Approx(0.0).margin(1e-10));
    CHECK(levels[1].E == Catch::Approx(40.0 / 9.0).margin(1e-10));
}

TEST_CASE("generic parameter set", "[spectrum]") {
    const NatanzonParams g{1.0, 1.0, 1.0, 80.0, 10.0, 20.0, std::nullopt};
    CHECK(potential_z(g, 0.5) == Catch::Approx(-46.0 / 9.0).epsilon(1e-12));
    const auto thr = continuum_threshold(g);
    REQUIRE(thr.has_value());
    CHECK(*thr == 11.0);

    const auto levels = enumerate_levels(g);
    REQUIRE(levels.size() == 3);
    CHECK(levels[0].E == Catch::Approx(-0.498803388303685625).margin(1e-9));
    CHECK(levels[1].E == Catch::Approx(7.41799601525428273).margin(1e-9));
    CHECK(levels[2].E == Catch::Approx(10.9598480255388953).margin(1e-9));
    for (const Level& lev : levels) CHECK(lev.E < *thr);
}

TEST_CASE("quantization and label identities on every level", "[spectrum]") {
    for (const NatanzonParams& p :
         {preset_pt2(4.5, 1.5, 1.0), preset_rm(3.0, 2.0, 1.0),
          NatanzonParams{1.0, 1.0, 1.0, 80.0, 10.0, 20.0, std::nullopt}}) {
        for (const Level& lev : enumerate_levels(p)) {
            CHECK(std::fabs(lev.alpha - lev.beta - lev.delta - (2.0 * lev.nu + 1.0)) < 1e-10);
            CHECK(std::fabs(lev.m - lev.nu - 0.5 * (1.0 + lev.delta)) < 1e-10);
            CHECK(std::fabs(lev.q - 0.25 * (lev.delta * lev.delta - 1.0)) < 1e-12);
            CHECK(std::fabs(quantization_residual(p, lev.E, lev.nu)) < 1e-10);
        }
    }
}

TEST_CASE("hard-wall box spectrum", "[spectrum]") {
    // Both continuum thresholds absent: the bracket has to grow upward.
    const NatanzonParams box{-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, std::nullopt};
    CHECK_FALSE(continuum_threshold(box).has_value());
    const auto levels = enumerate_levels(box, 4);
    REQUIRE(levels.size() == 4);
    for (const Level& lev : levels) {
        const double n = 2.0 * lev.nu + 3.0;
        CHECK(lev.E == Catch::Approx(n * n - 1.0).margin(1e-9));
    }
}

TEST_CASE("continuum thresholds", "[spectrum]") {
    CHECK(*continuum_threshold(preset_pt2(4.5, 1.5, 1.0)) == Catch::Approx(9.0));
    CHECK(*continuum_threshold(preset_rm(3.0, 2.0, 1.0)) ==
          Catch::Approx(49.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("no bound states below the threshold", "[spectrum]") {
    // alpha - beta - delta = 1 is already met at nu = 0 with delta < 0 needed
    // for any nu >= 0: the level list is empty.
    const NatanzonParams p{0.0, 0.0, 1.0, 0.0, 0.0, 0.0, std::nullopt};
    REQUIRE(admissible(p).ok);
    CHECK(enumerate_levels(p).empty());
    CHECK_FALSE(solve_level(p, 0).has_value());
}

TEST_CASE("solver input validation", "[spectrum]") {
    const NatanzonParams p = preset_pt2(4.5, 1.5, 1.0);
    CHECK_THROWS_AS(solve_level(p, -1), std::invalid_argument);
    const NatanzonParams bad{0.0, 0.0, 0.0, 1.0, 1.0, 1.0, std::nullopt};
    CHECK_THROWS_AS(solve_level(bad, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_level(p, 0, 100.0), std::invalid_argument);
    CHECK(std::isnan(quantization_residual(p, 100.0, 0)));
}

TEST_CASE("level alignment between indices", "[spectrum]") {
    const NatanzonParams pt2 = preset_pt2(4.5, 1.5, 1.0);
    // p is index-independent for this family but q is not.
    const auto a = irrep_alignment(pt2, 0, 1);
    CHECK_FALSE(a.aligned);
    CHECK(a.p0 == Catch::Approx(a.p1).epsilon(1e-12));
    CHECK(a.q0 != a.q1);

    // Both labels drift for the rm family.
    CHECK_FALSE(irrep_alignment(preset_rm(3.0, 2.0, 1.0), 0, 1).aligned);

    // A level against itself is trivially aligned.
    CHECK(irrep_alignment(pt2, 0, 0).aligned);

    // Missing level.
    CHECK_THROWS_AS(irrep_alignment(pt2, 0, 2), std::invalid_argument);
}
