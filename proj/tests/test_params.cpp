#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "natanzon/params.hpp"
#include "natanzon/params_json.hpp"
#include "natanzon/rational.hpp"

using namespace natanzon;

TEST_CASE("tau and discriminant", "[params]") {
    const NatanzonParams sym{0.0, 1.0, 1.0, 0.0, 0.0, 0.0, std::nullopt};
    CHECK(tau(sym) == 0.0);
    CHECK(discriminant(sym) == 0.0);

    const NatanzonParams g{2.0, 1.0, 4.0, 0.0, 0.0, 0.0, std::nullopt};
    CHECK(tau(g) == 1.0);
    CHECK(discriminant(g) == -7.0);
}

TEST_CASE("R evaluation", "[params]") {
    const NatanzonParams lin{0.0, 0.0, 1.0, 0.0, 0.0, 0.0, std::nullopt};
    CHECK(eval_R(lin, 0.25) == 0.25);

    const NatanzonParams any{3.0, 0.7, 2.0, 0.0, 0.0, 0.0, std::nullopt};
    CHECK(eval_R(any, 0.0) == any.c0);
    CHECK(eval_R(any, 1.0) == Catch::Approx(any.c1).margin(1e-15));

    // a = c0 = c1 = 1 gives tau = -1: value is z^2 - z + 1.
    const NatanzonParams ones{1.0, 1.0, 1.0, 0.0, 0.0, 0.0, std::nullopt};
    CHECK(eval_R(ones, 0.5) == 0.75);
    CHECK(eval_R_dz(ones, 0.5) == 0.0);
}

TEST_CASE("admissibility", "[params]") {
    CHECK(admissible(preset_pt2(4.5, 1.5, 1.0)).ok);
    CHECK(admissible(preset_rm(3.0, 2.0, 1.0)).ok);

    const NatanzonParams degenerate{0.0, 0.0, 0.0, 1.0, 1.0, 1.0, std::nullopt};
    CHECK_FALSE(admissible(degenerate).ok);
    CHECK_FALSE(admissible(degenerate).reason.empty());

    // R = z^2 - 1.01 z + 0.01 dips below zero inside (0, 1).
    const NatanzonParams dip{1.0, 0.01, 0.0, 0.0, 0.0, 0.0, std::nullopt};
    CHECK_FALSE(admissible(dip).ok);

    const NatanzonParams neg_c0{0.0, -1.0, 1.0, 0.0, 0.0, 0.0, std::nullopt};
    CHECK_FALSE(admissible(neg_c0).ok);

    // Hard-wall box: R = z(1 - z).
    const NatanzonParams box{-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, std::nullopt};
    CHECK(admissible(box).ok);
}

TEST_CASE("pt2 preset coefficients", "[params]") {
    const NatanzonParams p = preset_pt2(4.5, 1.5, 1.0);
    CHECK(p.a == 0.0);
    CHECK(p.c0 == 0.0);
    CHECK(p.c1 == 1.0);
    CHECK(p.f == 24.0);
    CHECK(p.h0 == 0.0);
    CHECK(p.h1 == 8.0);
    REQUIRE(p.preset.has_value());
    CHECK(p.preset->kind == PresetKind::pt2);

    // (2B - 3*alpha) factor vanishes.
    CHECK(preset_pt2(1.0, 1.5, 1.0).h0 == 0.0);
    // (A - B - alpha) factor vanishes.
    CHECK(preset_pt2(2.5, 1.5, 1.0).h1 == 0.0);

    CHECK_THROWS_AS(preset_pt2(4.5, 1.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(preset_pt2(4.5, 1.5, -1.0), std::invalid_argument);
}

TEST_CASE("rm preset coefficients", "[params]") {
    const NatanzonParams p = preset_rm(3.0, 2.0, 1.0);
    CHECK(p.a == 0.0);
    CHECK(p.c0 == 1.0);
    CHECK(p.c1 == 1.0);
    CHECK(p.f == 48.0);
    CHECK(p.h0 == Catch::Approx(40.0 / 9.0).epsilon(1e-15));
    CHECK(p.h1 == Catch::Approx(112.0 / 9.0).epsilon(1e-15));

    // B = 0 makes the two ends symmetric.
    const NatanzonParams s = preset_rm(2.0, 0.0, 1.0);
    CHECK(s.h0 == s.h1);
    CHECK(s.h0 == Catch::Approx(3.0).epsilon(1e-15));
    // B = A*alpha - A^2 zeroes h1.
    CHECK(preset_rm(2.0, -2.0, 1.0).h1 == 0.0);

    CHECK_THROWS_AS(preset_rm(0.0, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(preset_rm(3.0, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("exact-rational presets agree with floating point", "[params][rational]") {
    const RationalParams rp = preset_pt2_exact(Rational(9, 2), Rational(3, 2), Rational(1));
    CHECK(rp.f == Rational(24));
    CHECK(rp.h0 == Rational(0));
    CHECK(rp.h1 == Rational(8));

    const RationalParams rr = preset_rm_exact(Rational(3), Rational(2), Rational(1));
    CHECK(rr.f == Rational(48));
    CHECK(rr.h0 == Rational(40, 9));
    CHECK(rr.h1 == Rational(112, 9));

    const NatanzonParams fp = preset_rm(3.0, 2.0, 1.0);
    CHECK(fp.h0 == Catch::Approx(rr.h0.value()).epsilon(1e-15));
    CHECK(fp.h1 == Catch::Approx(rr.h1.value()).epsilon(1e-15));
}

TEST_CASE("rational arithmetic", "[rational]") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK((Rational(1, 2) + Rational(1, 3)) == Rational(5, 6));
    CHECK((Rational(9, 2) - Rational(3, 2)) == Rational(3));
    CHECK((Rational(5, 6) * Rational(3, 5)) == Rational(1, 2));
    CHECK((Rational(1, 2) / Rational(3, 2)) == Rational(1, 3));
    CHECK(-Rational(1, 2) == Rational(-1, 2));
    CHECK(Rational(-1, -2) == Rational(1, 2));
    CHECK(Rational(7, 3).value() == Catch::Approx(7.0 / 3.0).epsilon(1e-16));
    CHECK(Rational(11, 2).str() == "11/2");
    CHECK(Rational(4, 2).str() == "2");
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("domain classification", "[params]") {
    // PT2: finite wall on the left (c0 = 0), infinite on the right.
    const auto dpt2 = classify_domain(preset_pt2(4.5, 1.5, 1.0));
    CHECK(dpt2.left_finite);
    CHECK_FALSE(dpt2.right_finite);

    // RM: infinite on both sides.
    const auto drm = classify_domain(preset_rm(3.0, 2.0, 1.0));
    CHECK_FALSE(drm.left_finite);
    CHECK_FALSE(drm.right_finite);

    // Box: walls on both sides.
    const NatanzonParams box{-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, std::nullopt};
    const auto dbox = classify_domain(box);
    CHECK(dbox.left_finite);
    CHECK(dbox.right_finite);
}

TEST_CASE("json round trip", "[params][json]") {
    const NatanzonParams p = preset_pt2(4.5, 1.5, 1.0);
    const auto j = params_to_json(p);
    CHECK(j.at("a").get<double>() == 0.0);
    CHECK(j.at("f").get<double>() == 24.0);
    CHECK(j.at("preset").get<std::string>() == "pt2");
    CHECK(j.at("A").get<double>() == 4.5);

    const NatanzonParams back = params_from_json(j);
    CHECK(back.f == p.f);
    CHECK(back.h0 == p.h0);
    CHECK(back.h1 == p.h1);
    REQUIRE(back.preset.has_value());
    CHECK(back.preset->B == 1.5);

    // Plain coefficient sets carry no preset block.
    const NatanzonParams g{1.0, 1.0, 1.0, 80.0, 10.0, 20.0, std::nullopt};
    const auto jg = params_to_json(g);
    CHECK_FALSE(jg.contains("preset"));
    CHECK(params_from_json(jg).f == 80.0);
}

TEST_CASE("json validation errors", "[params][json]") {
    CHECK_THROWS_AS(params_from_json_text("{\"a\": 0}"), ParamsParseError);
    CHECK_THROWS_AS(params_from_json_text("not json"), ParamsParseError);
    CHECK_THROWS_AS(params_from_json_text("[1,2,3]"), ParamsParseError);
    CHECK_THROWS_AS(
        params_from_json_text("{\"a\":0,\"c0\":0,\"c1\":1,\"f\":\"x\",\"h0\":0,\"h1\":8}"),
        ParamsParseError);

    // Preset labels must regenerate the explicit coefficients.
    CHECK_THROWS_AS(params_from_json_text("{\"a\":0,\"c0\":0,\"c1\":1,\"f\":999,\"h0\":0,"
                                          "\"h1\":8,\"preset\":\"pt2\",\"A\":4.5,\"B\":1.5,"
                                          "\"alpha\":1}"),
                    ParamsParseError);
    CHECK_THROWS_AS(params_from_json_text("{\"a\":0,\"c0\":0,\"c1\":1,\"f\":24,\"h0\":0,"
                                          "\"h1\":8,\"preset\":\"nope\",\"A\":4.5,\"B\":1.5,"
                                          "\"alpha\":1}"),
                    ParamsParseError);

    // A consistent preset block parses.
    const NatanzonParams ok = params_from_json_text(
        "{\"a\":0,\"c0\":0,\"c1\":1,\"f\":24,\"h0\":0,\"h1\":8,\"preset\":\"pt2\","
        "\"A\":4.5,\"B\":1.5,\"alpha\":1}");
    REQUIRE(ok.preset.has_value());
    CHECK(ok.preset->A == 4.5);
}

TEST_CASE("potential values at fixed points", "[params]") {
    const NatanzonParams rm = preset_rm(3.0, 2.0, 1.0);
    // At the symmetry point z = 1/2: A^2 + B^2/A^2 - A(A+1).
    CHECK(potential_z(rm, 0.5) == Catch::Approx(-23.0 / 9.0).epsilon(1e-12));
    // Asymptotes A^2 + B^2/A^2 -/+ 2B, i.e. (h0+1)/c0 and (h1+1)/c1.
    CHECK((rm.h0 + 1.0) / rm.c0 == Catch::Approx(49.0 / 9.0).epsilon(1e-14));
    CHECK((rm.h1 + 1.0) / rm.c1 == Catch::Approx(121.0 / 9.0).epsilon(1e-14));
    CHECK(potential_z(rm, 1.0 - 1e-9) == Catch::Approx(121.0 / 9.0).epsilon(1e-6));

    // A rigid shift of (f, h0, h1) by eps*(a, c0, c1) shifts V by exactly eps.
    const NatanzonParams g{1.0, 1.0, 1.0, 80.0, 10.0, 20.0, std::nullopt};
    const double eps = 0.37;
    NatanzonParams shifted = g;
    shifted.f += eps * g.a;
    shifted.h0 += eps * g.c0;
    shifted.h1 += eps * g.c1;
    for (double z : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        CHECK(potential_z(shifted, z) - potential_z(g, z) == Catch::Approx(eps).epsilon(1e-10));
    }
}
