#pragma once

#include <vector>

#include "effnum/modmath.hpp"

namespace effnum {

// Largest accepted 2N. Trial-division factoring and the baby-step table
// both stay reasonable below this; everything above is refused loudly.
inline constexpr u64 kMaxTarget = 1'000'000'000'000ull;

// The even number 2N under analysis plus constants derived once.
struct EvenTarget {
    u64 n2 = 0;              // 2N
    u64 half = 0;            // N
    u64 totient = 0;         // phi(2N)
    u64 partition_count = 0; // F = phi(2N) / 2

    // Odd prime factors of n2, ascending. Classification needs nothing more.
    std::vector<u64> odd_prime_factors;
    // Prime factorization of phi(2N), for order computations.
    std::vector<std::pair<u64, int>> totient_factors;

    bool operator==(const EvenTarget& other) const {
        return n2 == other.n2;
    }
};

inline EvenTarget make_even_target(u64 n2) {
    if (n2 % 2 != 0 || n2 < 8)
        throw DomainError("target must be an even number >= 8, got " +
                          std::to_string(n2));
    if (n2 > kMaxTarget)
        throw LimitExceeded("target " + std::to_string(n2) +
                            " exceeds the supported bound " +
                            std::to_string(kMaxTarget));
    EvenTarget t;
    t.n2 = n2;
    t.half = n2 / 2;
    u64 phi = n2;
    for (const auto& [p, k] : factorize(n2)) {
        phi = phi / p * (p - 1);
        if (p != 2) t.odd_prime_factors.push_back(p);
    }
    t.totient = phi;
    t.partition_count = phi / 2;
    for (const auto& [p, k] : factorize(phi))
        t.totient_factors.emplace_back(p, k);
    return t;
}

// gcd(r, n2) == 1, using only the odd prime factors (r odd by context).
inline bool is_unit(const EvenTarget& t, u64 r) {
    if (r % 2 == 0) return false;
    for (u64 p : t.odd_prime_factors)
        if (r % p == 0) return false;
    return true;
}

}  // namespace effnum
