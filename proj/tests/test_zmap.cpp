#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <random>

#include "natanzon/integrate.hpp"
#include "natanzon/params.hpp"
#include "natanzon/zmap.hpp"

using namespace natanzon;

namespace {
double tanh_sq(double x) { return std::tanh(x) * std::tanh(x); }
}  // namespace

TEST_CASE("pt2 map matches the closed form", "[zmap]") {
    const NatanzonParams p = preset_pt2(4.5, 1.5, 1.0);
    const ZMap map(p, 2001);
    CHECK(map.form() == MapForm::pt2_tanh_sq);

    for (double r : {0.2, 0.5, 1.0, 2.0, 5.0}) {
        CHECK(map.z_of_r(r) == Catch::Approx(tanh_sq(r)).margin(1e-10));
    }
    CHECK(map.r_of_z(tanh_sq(1.0)) == Catch::Approx(1.0).margin(1e-8));

    // Beyond the tabulated range the asymptotic tail takes over smoothly.
    const double far = map.r_hi() + 2.0;
    CHECK(map.z_of_r(far) == Catch::Approx(tanh_sq(far)).margin(1e-14));
}

TEST_CASE("rm map matches the closed form", "[zmap]") {
    const NatanzonParams p = preset_rm(3.0, 2.0, 1.0);
    const ZMap map(p, 2001);
    CHECK(map.form() == MapForm::rm_shifted_tanh);
    CHECK(map.z_of_r(0.0) == Catch::Approx(0.5).margin(1e-12));
    for (double r : {-3.0, -1.0, 0.3, 1.7, 4.0}) {
        CHECK(map.z_of_r(r) == Catch::Approx(0.5 + 0.5 * std::tanh(r)).margin(1e-10));
    }
    // Left asymptotic tail.
    const double far = map.r_lo() - 3.0;
    CHECK(map.z_of_r(far) == Catch::Approx(0.5 + 0.5 * std::tanh(far)).margin(1e-14));
}

TEST_CASE("round trip on random interior points", "[zmap]") {
    const NatanzonParams gen{1.0, 1.0, 1.0, 80.0, 10.0, 20.0, std::nullopt};
    const ZMap map(gen, 2001);
    CHECK(map.form() == MapForm::numeric);

    std::mt19937 rng(12345u);
    std::uniform_real_distribution<double> pick(map.r_lo(), map.r_hi());
    for (int i = 0; i < 1000; ++i) {
        const double r = pick(rng);
        const double z = map.z_of_r(r);
        REQUIRE(z > 0.0);
        REQUIRE(z < 1.0);
        CHECK(map.r_of_z(z) == Catch::Approx(r).margin(1e-9));
    }
}

TEST_CASE("table nodes satisfy the defining first-order problem", "[zmap]") {
    const NatanzonParams gen{1.0, 1.0, 1.0, 80.0, 10.0, 20.0, std::nullopt};
    const ZMap map(gen, 501);
    const auto& zs = map.z_nodes();
    const auto& rs = map.r_nodes();
    REQUIRE(zs.size() == rs.size());
    // Independent cross-check: advance z' = w(z) with the adaptive RK from one
    // node to the next and compare against the stored node.
    for (std::size_t i = 40; i + 40 < zs.size(); i += 23) {
        const double z_end = rkf45_integrate([&](double, double z) { return dzdr(gen, z); }, rs[i],
                                             rs[i + 1], zs[i], 1e-13, 1e-15);
        CHECK(z_end == Catch::Approx(zs[i + 1]).margin(1e-10));
    }
}

TEST_CASE("hard-wall box geometry", "[zmap]") {
    const NatanzonParams box{-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, std::nullopt};
    const ZMap map(box, 2001);
    CHECK(map.domain().left_finite);
    CHECK(map.domain().right_finite);
    CHECK(map.wall_r() == Catch::Approx(std::acos(-1.0) / 2.0).margin(1e-8));
    for (double r : {0.2, 0.7, 1.2}) {
        CHECK(map.z_of_r(r) == Catch::Approx(std::sin(r) * std::sin(r)).margin(1e-10));
    }
    CHECK(map.z_of_r(0.0) == 0.0);
    CHECK(map.z_of_r(map.wall_r()) == 1.0);
    CHECK_THROWS_AS(map.z_of_r(-0.1), std::out_of_range);
    CHECK_THROWS_AS(map.z_of_r(map.wall_r() + 0.1), std::out_of_range);
}

TEST_CASE("near a finite endpoint z grows quadratically", "[zmap]") {
    const NatanzonParams p = preset_pt2(4.5, 1.5, 1.0);
    const ZMap map(p, 2001);
    const double z1 = map.z_of_r(1e-4), z2 = map.z_of_r(1e-5);
    const double slope = std::log(z1 / z2) / std::log(10.0);
    CHECK(slope == Catch::Approx(2.0).margin(0.05));
}

TEST_CASE("inverse map validates its argument", "[zmap]") {
    const NatanzonParams p = preset_pt2(4.5, 1.5, 1.0);
    const ZMap map(p, 501);
    CHECK_THROWS_AS(map.r_of_z(0.0), std::invalid_argument);
    CHECK_THROWS_AS(map.r_of_z(1.0), std::invalid_argument);
    CHECK_THROWS_AS(map.r_of_z(-0.3), std::invalid_argument);
    CHECK_THROWS_AS(map.r_of_z(1.2), std::invalid_argument);
}

TEST_CASE("construction validates its inputs", "[zmap]") {
    const NatanzonParams p = preset_pt2(4.5, 1.5, 1.0);
    CHECK_THROWS_AS(ZMap(p, 50), std::invalid_argument);
    CHECK_THROWS_AS(ZMap(p, 501, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ZMap(p, 501, 1.0), std::invalid_argument);
    const NatanzonParams bad{0.0, 0.0, 0.0, 1.0, 1.0, 1.0, std::nullopt};
    CHECK_THROWS_AS(ZMap(bad, 501), std::invalid_argument);

    // Even requested sizes are bumped to odd so the anchor node is exact.
    const ZMap even(p, 200);
    CHECK(even.z_nodes().size() == 201);
}

TEST_CASE("grid size environment override", "[zmap]") {
    unsetenv("NATANZON_GRID_N");
    const int base = default_grid_n();
    setenv("NATANZON_GRID_N", "1001", 1);
    CHECK(default_grid_n() == 1001);
    setenv("NATANZON_GRID_N", "1000", 1);
    CHECK(default_grid_n() == 1001);
    setenv("NATANZON_GRID_N", "garbage", 1);
    CHECK_THROWS_AS(default_grid_n(), std::invalid_argument);
    setenv("NATANZON_GRID_N", "7", 1);
    CHECK_THROWS_AS(default_grid_n(), std::invalid_argument);
    unsetenv("NATANZON_GRID_N");
    CHECK(default_grid_n() == base);
}

TEST_CASE("potential along the map", "[zmap]") {
    const NatanzonParams p = preset_pt2(4.5, 1.5, 1.0);
    const ZMap map(p);
    // csch^2/sech^2 closed form at r = 1.
    const double v1 = map.potential(1.0);
    CHECK(v1 == Catch::Approx(-0.851318709222412367707802699433).margin(1e-9));
    CHECK(potential_value(p, map, 1.0) == v1);
    CHECK(potential_value(map, 1.0) == v1);

    // Generic set: asymptotes on both sides.
    const NatanzonParams gen{1.0, 1.0, 1.0, 80.0, 10.0, 20.0, std::nullopt};
    const ZMap gmap(gen, 2001);
    CHECK(potential_value(gmap, gmap.r_lo()) == Catch::Approx(11.0).epsilon(1e-6));
    CHECK(potential_value(gmap, gmap.r_hi()) == Catch::Approx(21.0).epsilon(1e-6));

    // Derivatives of the change of variable at the anchor.
    double w, wz, wzz;
    detail::w_derivs(gen, 0.5, w, wz, wzz);
    CHECK(w == Catch::Approx(2.0 * 0.5 * 0.5 / std::sqrt(eval_R(gen, 0.5))).epsilon(1e-14));
    CHECK(d2zdr2(gen, 0.5) == Catch::Approx(w * wz).epsilon(1e-14));
}
