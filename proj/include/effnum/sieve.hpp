#pragma once

#include <vector>

#include "effnum/base.hpp"

namespace effnum {

inline constexpr u64 kDefaultSieveLimit = 100'000'000;

// Bit-per-odd-number sieve of Eratosthenes with O(1) queries.
class Sieve {
  public:
    explicit Sieve(u64 limit, u64 max_limit = kDefaultSieveLimit)
        : limit_(limit) {
        if (limit > max_limit)
            throw LimitExceeded("sieve limit " + std::to_string(limit) +
                                " exceeds the configured bound " +
                                std::to_string(max_limit));
        u64 odds = limit / 2 + 1; // odd n maps to bit n/2
        composite_.assign((odds + 63) / 64, 0);
        set_bit(0); // 1 is not prime
        for (u64 p = 3; p * p <= limit_; p += 2) {
            if (test_bit(p / 2)) continue;
            for (u64 q = p * p; q <= limit_; q += 2 * p) set_bit(q / 2);
        }
    }

    u64 limit() const { return limit_; }

    bool is_prime(u64 n) const {
        if (n > limit_)
            throw DomainError("sieve query " + std::to_string(n) +
                              " beyond limit " + std::to_string(limit_));
        if (n == 2) return true;
        if (n < 2 || n % 2 == 0) return false;
        return !test_bit(n / 2);
    }

  private:
    void set_bit(u64 i) { composite_[i / 64] |= 1ull << (i % 64); }
    bool test_bit(u64 i) const {
        return (composite_[i / 64] >> (i % 64)) & 1;
    }

    u64 limit_;
    std::vector<u64> composite_;
};

}  // namespace effnum
