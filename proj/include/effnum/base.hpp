#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace effnum {

inline constexpr const char* kVersion = "0.1.0";

using u64 = std::uint64_t;
using i64 = std::int64_t;

// Base class for every error this library raises on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The base (or a probed value) shares a factor with 2N; no order exists.
struct NotAUnit : Error {
    using Error::Error;
};

// A prime was passed where a census eff-prime was required.
struct NotEffPrime : Error {
    using Error::Error;
};

// Input is outside the supported domain (odd, too small, wrong parity...).
struct DomainError : Error {
    using Error::Error;
};

// A configured resource bound (sieve size, target magnitude) was exceeded.
struct LimitExceeded : Error {
    using Error::Error;
};

// A factor prime has no index under the chosen base; the row cannot form.
struct MissingIndex : Error {
    using Error::Error;
};

// An internal invariant failed. Always a defect, never a data condition.
struct InternalInconsistency : Error {
    using Error::Error;
};

// A range scan found an even number with no prime pair summing to it.
// Raising this is the loudest thing the library can do.
struct SieveWitnessAbsence : Error {
    u64 n2;
    explicit SieveWitnessAbsence(u64 n2_, const std::string& what)
        : Error(what), n2(n2_) {}
};

}  // namespace effnum
