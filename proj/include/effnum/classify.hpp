#pragma once

#include <string>
#include <vector>

#include "effnum/target.hpp"

namespace effnum {

// Classes an odd residue r in (0, 2N) can fall into. Exactly one applies.
enum class EffClass {
    SharedFactor, // gcd(r, 2N) > 1
    One,          // r = 1
    Boundary,     // r = 2N - 1 (unit by construction; prime or not)
    EffPrime,     // prime unit strictly inside (1, 2N-1)
    EffProduct,   // composite odd unit strictly inside (1, 2N-1)
};

inline const char* to_string(EffClass c) {
    switch (c) {
        case EffClass::SharedFactor: return "shared_factor";
        case EffClass::One: return "one";
        case EffClass::Boundary: return "boundary";
        case EffClass::EffPrime: return "eff_prime";
        case EffClass::EffProduct: return "eff_product";
    }
    return "?";
}

inline EffClass classify_residue(const EvenTarget& t, u64 r) {
    if (r % 2 == 0 || r == 0 || r >= t.n2)
        throw DomainError("classify_residue: r must be odd and in (0, " +
                          std::to_string(t.n2) + "), got " + std::to_string(r));
    if (!is_unit(t, r)) return EffClass::SharedFactor;
    if (r == 1) return EffClass::One;
    if (r == t.n2 - 1) return EffClass::Boundary;
    return is_prime(r) ? EffClass::EffPrime : EffClass::EffProduct;
}

// Full classification of the odd residues of 2N.
struct Census {
    EvenTarget target;
    std::vector<u64> eff_primes;   // ascending
    std::vector<u64> eff_products; // ascending
    u64 s = 0;                     // |eff_primes|
    bool boundary_is_prime = false;

    bool operator==(const Census& other) const {
        return target == other.target && eff_primes == other.eff_primes &&
               eff_products == other.eff_products && s == other.s &&
               boundary_is_prime == other.boundary_is_prime;
    }
};

inline Census census(const EvenTarget& t) {
    Census c;
    c.target = t;
    for (u64 r = 3; r < t.n2 - 1; r += 2) {
        if (!is_unit(t, r)) continue;
        if (is_prime(r))
            c.eff_primes.push_back(r);
        else
            c.eff_products.push_back(r);
    }
    c.s = c.eff_primes.size();
    c.boundary_is_prime = is_prime(t.n2 - 1);
    return c;
}

// Unordered pair {low, 2N - low} of units.
struct EffPartition {
    u64 low = 0;
    u64 high = 0;

    bool operator==(const EffPartition& other) const {
        return low == other.low && high == other.high;
    }
    bool operator<(const EffPartition& other) const {
        return low < other.low;
    }
};

// All F = phi(2N)/2 partitions, sorted by low addend. {1, 2N-1} included.
inline std::vector<EffPartition> eff_partitions(const EvenTarget& t) {
    std::vector<EffPartition> parts;
    for (u64 r = 1; r <= t.half; r += 2)
        if (is_unit(t, r)) parts.push_back({r, t.n2 - r});
    return parts;
}

}  // namespace effnum
