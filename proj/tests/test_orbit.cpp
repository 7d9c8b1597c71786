#include <catch2/catch_amalgamated.hpp>

#include "effnum/orbit.hpp"
#include "oracles.hpp"

using namespace effnum;

namespace {

// Residues of 3^j mod 68 for one full cycle, j = 0..16.
const std::vector<u64> kCycle68{1,  3,  9,  27, 13, 39, 49, 11, 33,
                                31, 25, 7,  21, 63, 53, 23, 1};

}  // namespace

TEST_CASE("base reduction validates units", "[orbit]") {
    EvenTarget t = make_even_target(68);
    CHECK(reduce_unit_base(t, 3) == 3);
    CHECK(reduce_unit_base(t, 71) == 3);
    CHECK_THROWS_AS(reduce_unit_base(t, 1), DomainError);
    CHECK_THROWS_AS(reduce_unit_base(t, 0), DomainError);
    CHECK_THROWS_AS(reduce_unit_base(t, 2), NotAUnit);
    CHECK_THROWS_AS(reduce_unit_base(t, 17), NotAUnit);
    CHECK_THROWS_AS(reduce_unit_base(t, 34), NotAUnit);
    CHECK_THROWS_AS(reduce_unit_base(t, 68), NotAUnit);
}

TEST_CASE("multiplicative order golden values", "[orbit]") {
    CHECK(mult_order(3, make_even_target(68)) == 16);
    CHECK(mult_order(67, make_even_target(68)) == 2);
    CHECK(mult_order(5, make_even_target(24)) == 2);
    CHECK(mult_order(3, make_even_target(8)) == 2);
    CHECK(mult_order(3, make_even_target(38)) == 18);
    CHECK(mult_order(55, make_even_target(68)) == 4);
}

TEST_CASE("order agrees with the orbit walk", "[orbit]") {
    for (u64 n2 = 8; n2 <= 500; n2 += 2) {
        EvenTarget t = make_even_target(n2);
        for (u64 b = 3; b < n2; b += 2) {
            if (!is_unit(t, b)) continue;
            REQUIRE(mult_order(b, t) == oracle::mult_order(b, n2));
        }
    }
}

TEST_CASE("partition period golden values", "[orbit]") {
    EvenTarget t68 = make_even_target(68);
    CHECK(partition_period(t68, 3, 16) == 16); // -1 not a power of 3

    EvenTarget t38 = make_even_target(38);
    CHECK(partition_period(t38, 3, 18) == 9); // 3^9 = -1 (mod 38)

    EvenTarget t8 = make_even_target(8);
    CHECK(partition_period(t8, 7, 2) == 1); // 7 = -1 (mod 8)
    CHECK(partition_period(t8, 3, 2) == 2);
}

TEST_CASE("partition period is the true cycle of the low sequence",
          "[orbit]") {
    for (u64 n2 = 8; n2 <= 300; n2 += 2) {
        EvenTarget t = make_even_target(n2);
        for (u64 b = 3; b < n2; b += 2) {
            if (!is_unit(t, b)) continue;
            u64 f = mult_order(b, t);
            u64 fp = partition_period(t, b, f);

            // Low sequence of one full cycle.
            std::vector<u64> lows(f);
            u64 r = 1;
            for (u64 j = 0; j < f; ++j) {
                lows[j] = std::min(r, n2 - r);
                r = mulmod(r, b, n2);
            }
            // Smallest divisor of f that is a period of the low sequence.
            u64 smallest = f;
            for (u64 g = 1; g < f; ++g) {
                if (f % g != 0) continue;
                bool periodic = true;
                for (u64 j = 0; j + g < f && periodic; ++j)
                    periodic = lows[j] == lows[j + g];
                if (periodic) {
                    smallest = g;
                    break;
                }
            }
            REQUIRE(fp == smallest);
        }
    }
}

TEST_CASE("orbit table of 3 mod 68 matches the golden cycle", "[orbit]") {
    EvenTarget t = make_even_target(68);
    std::vector<PowerStep> rows = orbit_table(t, 3, 32);
    REQUIRE(rows.size() == 33);

    bigint pj = 1;
    for (u64 j = 0; j <= 32; ++j) {
        const PowerStep& s = rows[j];
        CHECK(s.base == 3);
        CHECK(s.exponent == j);
        CHECK(s.residue == kCycle68[j % 16]);
        CHECK(s.high_addend == s.residue);
        CHECK(s.low_addend == 68 - s.residue);
        // Window identity against an independently grown power.
        CHECK(s.multiplier * 68 - pj == s.low_addend);
        CHECK(pj - (s.multiplier - 1) * 68 == s.high_addend);
        pj *= 3;
    }
    CHECK(rows[0].multiplier == 1);
    CHECK(rows[4].multiplier == 2);
    CHECK(rows[11].multiplier == 2606);
    CHECK(rows[13].multiplier == 23446);
    CHECK(rows[16].multiplier == 633041);
    CHECK(rows[32].multiplier == bigint("27250296894881"));
}

TEST_CASE("single power step equals its table row", "[orbit]") {
    EvenTarget t = make_even_target(68);
    std::vector<PowerStep> rows = orbit_table(t, 3, 32);
    for (u64 j : {0u, 1u, 11u, 16u, 32u})
        CHECK(power_step(t, 3, j) == rows[j]);
}

TEST_CASE("orbit table refuses absurd sizes", "[orbit]") {
    EvenTarget t = make_even_target(68);
    CHECK_THROWS_AS(orbit_table(t, 3, 5'000'000'000ull), LimitExceeded);
    CHECK_THROWS_AS(orbit_table(t, 3, 200'000'000ull), LimitExceeded);
}

TEST_CASE("multipliers never decrease", "[orbit]") {
    EvenTarget t = make_even_target(38);
    std::vector<PowerStep> rows = orbit_table(t, 3, 60);
    for (u64 j = 1; j < rows.size(); ++j) {
        REQUIRE(rows[j].multiplier >= rows[j - 1].multiplier);
        REQUIRE(rows[j].residue + rows[j].low_addend == 38);
    }
}

TEST_CASE("orbit residues walk one full cycle", "[orbit]") {
    EvenTarget t = make_even_target(68);
    std::vector<u64> rs = orbit_residues(t, 3);
    REQUIRE(rs.size() == 16);
    for (u64 j = 0; j < 16; ++j) CHECK(rs[j] == kCycle68[j]);
}

TEST_CASE("full orbit of 3 mod 68 covers everything", "[orbit]") {
    EvenTarget t = make_even_target(68);
    Orbit orbit = build_orbit(t, 3);
    CHECK(orbit.period == 16);
    CHECK(orbit.partition_period == 16);
    CHECK(orbit.steps.size() == 16);
    CHECK(orbit.partitions_hit.size() == 16);
    CHECK(orbit.covers_all);
}

TEST_CASE("short orbits do not cover", "[orbit]") {
    EvenTarget t = make_even_target(24); // F = 4, every order is <= 2
    Orbit orbit = build_orbit(t, 5);
    CHECK(orbit.period == 2);
    CHECK(orbit.partitions_hit.size() == 2);
    CHECK_FALSE(orbit.covers_all);
}

TEST_CASE("residue periodicity across cycles", "[orbit]") {
    for (u64 n2 : {8u, 10u, 38u, 68u, 90u}) {
        EvenTarget t = make_even_target(n2);
        for (u64 b = 3; b < n2; b += 2) {
            if (!is_unit(t, b)) continue;
            u64 f = mult_order(b, t);
            std::vector<PowerStep> rows = orbit_table(t, b, 2 * f);
            for (u64 j = 0; j < f; ++j)
                REQUIRE(rows[j].residue == rows[j + f].residue);
        }
    }
}
