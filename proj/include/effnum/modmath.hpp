#pragma once

#include <array>
#include <map>
#include <numeric>
#include <vector>

#include "effnum/base.hpp"

namespace effnum {

// (a * b) mod m without overflow for any 64-bit operands.
inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

// base^exp mod modulus by square-and-multiply. Rejects modulus < 2.
inline u64 pow_mod(u64 base, u64 exp, u64 modulus) {
    if (modulus < 2) throw DomainError("pow_mod: modulus must be >= 2");
    u64 result = 1 % modulus;
    base %= modulus;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, modulus);
        base = mulmod(base, base, modulus);
        exp >>= 1;
    }
    return result;
}

// Deterministic Miller-Rabin. The fixed witness set decides primality
// exactly for every 64-bit integer, so golden tables are bit-stable.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                  23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                  23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Prime factorization by trial division, as an exponent map.
// Fine at desk scale (inputs stay <= 10^12 elsewhere in the library).
inline std::map<u64, int> factorize(u64 n) {
    std::map<u64, int> factors;
    for (u64 p = 2; p * p <= n; p += (p == 2) ? 1 : 2) {
        while (n % p == 0) {
            ++factors[p];
            n /= p;
        }
    }
    if (n > 1) ++factors[n];
    return factors;
}

// Euler's totient via factorization.
inline u64 totient(u64 n) {
    if (n == 0) throw DomainError("totient: n must be positive");
    u64 result = n;
    for (const auto& [p, k] : factorize(n)) result = result / p * (p - 1);
    return result;
}

}  // namespace effnum
