#pragma once

#include <bit>
#include <boost/multiprecision/cpp_int.hpp>
#include <set>
#include <vector>

#include "effnum/classify.hpp"

namespace effnum {

using bigint = boost::multiprecision::cpp_int;

// Default cap on orbit_table row counts; unbounded multipliers grow a
// digit every few rows, so runaway tables are refused unless asked for.
inline constexpr u64 kDefaultMaxJ = 10'000;

// One row of the power sequence: P^j splits 2N as low + high with
// high = P^j mod 2N and an exact window multiplier M = floor(P^j/2N) + 1.
struct PowerStep {
    u64 base = 0;      // P as given
    u64 exponent = 0;  // j
    u64 residue = 0;   // P^j mod 2N, in (0, 2N)
    bigint multiplier; // M, unbounded
    u64 low_addend = 0;  // 2N - residue = M*2N - P^j
    u64 high_addend = 0; // residue = P^j - (M-1)*2N

    bool operator==(const PowerStep& other) const {
        return base == other.base && exponent == other.exponent &&
               residue == other.residue && multiplier == other.multiplier &&
               low_addend == other.low_addend &&
               high_addend == other.high_addend;
    }
};

inline u64 reduce_unit_base(const EvenTarget& t, u64 base) {
    if (base < 2)
        throw DomainError("base must be an integer >= 2, got " +
                          std::to_string(base));
    u64 b = base % t.n2;
    if (b == 0 || !is_unit(t, b))
        throw NotAUnit("base " + std::to_string(base) +
                       " shares a factor with " + std::to_string(t.n2));
    return b;
}

// Smallest f >= 1 with base^f = 1 (mod 2N), by descending from phi(2N)
// through its prime factors.
inline u64 mult_order(u64 base, const EvenTarget& t) {
    u64 b = reduce_unit_base(t, base);
    u64 order = t.totient;
    for (const auto& [p, k] : t.totient_factors) {
        for (int i = 0; i < k; ++i) {
            if (order % p == 0 && pow_mod(b, order / p, t.n2) == 1)
                order /= p;
            else
                break;
        }
    }
    return order;
}

// Cycle length of the partition sequence: f when -1 is not a power of
// the base, f/2 when it is (the orbit then meets each partition twice).
inline u64 partition_period(const EvenTarget& t, u64 base, u64 order) {
    u64 b = reduce_unit_base(t, base);
    if (order % 2 == 0 && pow_mod(b, order / 2, t.n2) == t.n2 - 1)
        return order / 2;
    return order;
}

inline PowerStep power_step(const EvenTarget& t, u64 base, u64 j) {
    u64 b = reduce_unit_base(t, base);
    PowerStep step;
    step.base = base;
    step.exponent = j;
    step.residue = pow_mod(b, j, t.n2);
    bigint pj = boost::multiprecision::pow(bigint(base), static_cast<unsigned>(j));
    step.multiplier = pj / t.n2 + 1;
    step.high_addend = step.residue;
    step.low_addend = t.n2 - step.residue;
    return step;
}

// Rows j = 0 ... j_max inclusive, multipliers computed incrementally.
inline std::vector<PowerStep> orbit_table(const EvenTarget& t, u64 base,
                                          u64 j_max) {
    u64 b = reduce_unit_base(t, base);
    // Row j's multiplier holds about j*log2(base) bits, so the whole table
    // needs roughly log2(base)*j_max^2/2 of them. Refuse past ~500 MB.
    constexpr u64 kBitBudget = 4'000'000'000;
    u64 width = std::bit_width(base);
    bool over = j_max >= 100'000'000;
    if (!over) over = width * j_max * (j_max + 1) / 2 > kBitBudget;
    if (over)
        throw LimitExceeded("orbit_table: rows through j=" +
                            std::to_string(j_max) + " for base " +
                            std::to_string(base) +
                            " would exceed the multiplier memory budget");
    std::vector<PowerStep> rows;
    rows.reserve(j_max + 1);
    bigint pj = 1;
    u64 r = 1;
    for (u64 j = 0; j <= j_max; ++j) {
        PowerStep step;
        step.base = base;
        step.exponent = j;
        step.residue = r;
        step.multiplier = pj / t.n2 + 1;
        step.high_addend = r;
        step.low_addend = t.n2 - r;
        rows.push_back(std::move(step));
        pj *= base;
        r = mulmod(r, b, t.n2);
    }
    return rows;
}

// Residues P^j mod 2N for j = 0 ... order-1 (fast path, no big integers).
inline std::vector<u64> orbit_residues(const EvenTarget& t, u64 base) {
    u64 b = reduce_unit_base(t, base);
    std::vector<u64> residues;
    u64 r = 1;
    do {
        residues.push_back(r);
        r = mulmod(r, b, t.n2);
    } while (r != 1);
    return residues;
}

// The full cycle of a base: steps, partition coverage, both periods.
struct Orbit {
    EvenTarget target;
    u64 base = 0;
    u64 period = 0;           // multiplicative order f
    u64 partition_period = 0; // cycle length of the partition sequence
    std::vector<PowerStep> steps;
    std::vector<EffPartition> partitions_hit; // sorted by low addend
    bool covers_all = false;

    bool operator==(const Orbit& other) const {
        return target == other.target && base == other.base &&
               period == other.period &&
               partition_period == other.partition_period &&
               steps == other.steps &&
               partitions_hit == other.partitions_hit &&
               covers_all == other.covers_all;
    }
};

inline Orbit build_orbit(const EvenTarget& t, u64 base) {
    Orbit orbit;
    orbit.target = t;
    orbit.base = base;
    orbit.period = mult_order(base, t);
    orbit.partition_period = partition_period(t, base, orbit.period);
    orbit.steps = orbit_table(t, base, orbit.period - 1);
    std::set<u64> lows;
    for (const PowerStep& step : orbit.steps)
        lows.insert(std::min(step.residue, t.n2 - step.residue));
    for (u64 low : lows) orbit.partitions_hit.push_back({low, t.n2 - low});
    orbit.covers_all = orbit.partitions_hit.size() == t.partition_count;
    return orbit;
}

}  // namespace effnum
