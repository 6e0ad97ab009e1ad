#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "natanzon/spectrum.hpp"
#include "natanzon/verify.hpp"
#include "natanzon/wavefunction.hpp"
#include "natanzon/zmap.hpp"

using namespace natanzon;

namespace {
const NatanzonParams& generic_set() {
    static const NatanzonParams p{1.0, 1.0, 1.0, 80.0, 10.0, 20.0, std::nullopt};
    return p;
}
}  // namespace

TEST_CASE("finite-difference spectra confirm the analytic levels", "[verify][fd]") {
    SECTION("first preset") {
        const NatanzonParams p = preset_pt2(4.5, 1.5, 1.0);
        const ZMap map(p);
        const auto fd = fd_eigensolve(p, map, 2);
        REQUIRE(fd.energies.size() == 2);
        CHECK(fd.found_requested);
        CHECK(fd.energies[0] == Catch::Approx(0.0).margin(1e-4));
        CHECK(fd.energies[1] == Catch::Approx(8.0).margin(1e-4));
    }
    SECTION("second preset") {
        const NatanzonParams p = preset_rm(3.0, 2.0, 1.0);
        const ZMap map(p);
        const auto fd = fd_eigensolve(p, map, 2);
        REQUIRE(fd.energies.size() == 2);
        CHECK(fd.energies[0] == Catch::Approx(0.0).margin(1e-3));
        CHECK(fd.energies[1] == Catch::Approx(40.0 / 9.0).margin(1e-3));
    }
    SECTION("a set away from both presets") {
        const ZMap map(generic_set());
        const auto levels = enumerate_levels(generic_set());
        REQUIRE(levels.size() == 3);
        const auto fd = fd_eigensolve(generic_set(), map, 3);
        REQUIRE(fd.energies.size() == 3);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(fd.energies[i] == Catch::Approx(levels[i].E).margin(1e-4));
    }
    SECTION("hard walls on both sides") {
        const NatanzonParams box{-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, std::nullopt};
        const ZMap map(box, 1001);
        const auto fd = fd_eigensolve(box, map, 2);
        REQUIRE(fd.energies.size() == 2);
        CHECK(fd.energies[0] == Catch::Approx(8.0).margin(1e-3));
        CHECK(fd.energies[1] == Catch::Approx(24.0).margin(1e-3));
    }
    SECTION("a potential with no bound level comes back empty") {
        const NatanzonParams p{0.0, 0.0, 1.0, 0.0, 0.0, 0.0, std::nullopt};
        REQUIRE(admissible(p).ok);
        CHECK(enumerate_levels(p).empty());
        const ZMap map(p);
        const auto fd = fd_eigensolve(p, map, 1);
        CHECK(fd.energies.empty());
        CHECK_FALSE(fd.found_requested);
    }
    SECTION("at least one level must be requested") {
        const NatanzonParams p = preset_pt2(4.5, 1.5, 1.0);
        const ZMap map(p);
        CHECK_THROWS_AS(fd_eigensolve(p, map, 0), std::invalid_argument);
    }
}

TEST_CASE("operator residuals vanish on every bound state", "[verify]") {
    const std::vector<NatanzonParams> sets{preset_pt2(4.5, 1.5, 1.0), preset_rm(3.0, 2.0, 1.0),
                                           generic_set()};
    for (const auto& p : sets) {
        auto map = std::make_shared<const ZMap>(p);
        for (const Level& lev : enumerate_levels(p)) {
            const BoundState st = build_state(map, lev.nu);
            const auto schr = schrodinger_residual(p, *map, st);
            const auto cas = casimir_residual(p, *map, st);
            const auto mas = master_residual(p, *map, st);
            INFO("nu=" << lev.nu << " f=" << p.f);
            CHECK(schr.l2_relative < 1e-6);
            CHECK(cas.l2_relative < 1e-5);
            CHECK(mas.l2_relative < 1e-5);
            CHECK_FALSE(schr.which.empty());
            CHECK_FALSE(schr.grid.empty());
        }
    }
}

TEST_CASE("residuals are sensitive to deliberately wrong inputs", "[verify]") {
    const NatanzonParams p = preset_pt2(4.5, 1.5, 1.0);
    auto map = std::make_shared<const ZMap>(p);
    const BoundState s0 = build_state(map, 0);

    const double schr_base = schrodinger_residual(p, *map, s0).l2_relative;
    const double schr_off = schrodinger_residual(p, *map, s0, 2001, 0.01).l2_relative;
    CHECK(schr_off > 1e-3);
    CHECK(schr_off > 1e3 * schr_base);

    const double cas_base = casimir_residual(p, *map, s0).l2_relative;
    const double cas_off = casimir_residual(p, *map, s0, 2001, 1.0).l2_relative;
    CHECK(cas_off == Catch::Approx(1.0).epsilon(1e-6));
    CHECK(cas_off > 1e3 * cas_base);

    const double mas_base = master_residual(p, *map, s0).l2_relative;
    const double mas_off = master_residual(p, *map, s0, 2001, true).l2_relative;
    CHECK(mas_off > 1e3 * mas_base);
}

TEST_CASE("the two closed forms of the master weight agree", "[verify]") {
    for (const auto& p :
         {preset_pt2(4.5, 1.5, 1.0), preset_rm(3.0, 2.0, 1.0), generic_set()}) {
        const ZMap map(p);
        CHECK(master_g_consistency(p, map) < 1e-12);
    }
}

TEST_CASE("the full verification battery passes on the presets", "[verify]") {
    for (const auto& p : {preset_pt2(4.5, 1.5, 1.0), preset_rm(3.0, 2.0, 1.0)}) {
        const VerifyReport rep = run_verify(p);
        REQUIRE_FALSE(rep.rows.empty());
        for (const auto& row : rep.rows) {
            INFO(row.name << " value=" << row.value << " threshold=" << row.threshold);
            CHECK(row.pass);
        }
        CHECK(rep.all_pass);
    }
}
