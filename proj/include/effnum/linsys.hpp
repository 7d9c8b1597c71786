#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <vector>

#include "effnum/index.hpp"

namespace effnum {

using rational = boost::multiprecision::cpp_rational;

// Factorization of a complement R = 2N - p over the census eff-primes.
// Every prime factor of a composite R is itself an eff-prime: R is a unit
// (gcd(R, 2N) = gcd(p, 2N) = 1), odd, and inside (1, 2N-1).
struct ComplementFactorization {
    u64 prime = 0;      // p
    u64 complement = 0; // R = 2N - p
    bool is_goldbach = false;      // R is prime; no row, a witness instead
    std::vector<i64> exponents;    // k(l) by census position; empty if goldbach

    bool operator==(const ComplementFactorization& other) const {
        return prime == other.prime && complement == other.complement &&
               is_goldbach == other.is_goldbach &&
               exponents == other.exponents;
    }
};

namespace detail {

inline u64 census_position(const Census& c, u64 p) {
    auto it = std::lower_bound(c.eff_primes.begin(), c.eff_primes.end(), p);
    if (it == c.eff_primes.end() || *it != p)
        throw NotEffPrime(std::to_string(p) + " is not an eff-prime of " +
                          std::to_string(c.target.n2));
    return static_cast<u64>(it - c.eff_primes.begin());
}

}  // namespace detail

inline ComplementFactorization factor_complement(const Census& c, u64 p) {
    u64 pos = detail::census_position(c, p);
    (void)pos;
    ComplementFactorization fact;
    fact.prime = p;
    fact.complement = c.target.n2 - p;
    if (is_prime(fact.complement)) {
        fact.is_goldbach = true;
        return fact;
    }
    fact.exponents.assign(c.eff_primes.size(), 0);
    u64 rem = fact.complement;
    i64 total = 0;
    for (u64 l = 0; l < c.eff_primes.size(); ++l) {
        u64 q = c.eff_primes[l];
        if (q * q > rem) break;
        while (rem % q == 0) {
            rem /= q;
            ++fact.exponents[l];
            ++total;
        }
    }
    if (rem > 1) {
        // The leftover is prime (no factor up to its square root survived)
        // and must be a census eff-prime by unit closure.
        auto it = std::lower_bound(c.eff_primes.begin(), c.eff_primes.end(), rem);
        if (it == c.eff_primes.end() || *it != rem)
            throw InternalInconsistency(
                "factor " + std::to_string(rem) + " of complement " +
                std::to_string(fact.complement) + " is outside the census");
        ++fact.exponents[it - c.eff_primes.begin()];
        ++total;
    }
    u64 check = 1;
    for (u64 l = 0; l < c.eff_primes.size(); ++l)
        for (i64 i = 0; i < fact.exponents[l]; ++i) check *= c.eff_primes[l];
    if (check != fact.complement || total < 2 ||
        fact.exponents[detail::census_position(c, p)] != 0)
        throw InternalInconsistency(
            "complement factorization of " + std::to_string(fact.complement) +
            " violated its invariants");
    return fact;
}

inline ComplementFactorization factor_complement(const EvenTarget& t, u64 p) {
    return factor_complement(census(t), p);
}

// One equation of the system: the exponent vector of R = 2N - p with -1
// at p's own position, equated to m * fp where fp is the partition-cycle
// length. (The index-like Q and the index J are always congruent mod fp:
// P^{Q-J} = +-1. Modulo the full order f this fails whenever -1 is a
// power of P, so fp is the modulus that makes every row exact.)
struct EquationRow {
    u64 target_index = 0; // census position of prime (0-based)
    u64 prime = 0;
    std::vector<i64> coefficients;
    i64 q_value = 0; // Q = sum of k(l) * J(l)
    i64 m_value = 0; // (Q - J) / fp
    i64 rhs = 0;     // m * fp
    i64 index = 0;   // J of the prime itself, for display
    // Sign of P^Q against R: P^Q = +R (residue) or -R (complement) mod 2N.
    // Reported only; no claim in the machinery depends on it.
    IndexForm q_sign = IndexForm::Residue;

    bool operator==(const EquationRow& other) const {
        return target_index == other.target_index && prime == other.prime &&
               coefficients == other.coefficients &&
               q_value == other.q_value && m_value == other.m_value &&
               rhs == other.rhs && index == other.index &&
               q_sign == other.q_sign;
    }
};

inline EquationRow build_row(const Census& c, const IndexTable& table,
                             const ComplementFactorization& fact) {
    if (fact.is_goldbach)
        throw DomainError("build_row: complement of " +
                          std::to_string(fact.prime) +
                          " is prime; no row exists");
    auto entry_of = [&](u64 p) -> const IndexEntry& {
        auto it = table.entries.find(p);
        if (it == table.entries.end())
            throw MissingIndex("no index for eff-prime " + std::to_string(p) +
                               " under base " + std::to_string(table.base));
        return it->second;
    };
    EquationRow row;
    row.target_index = detail::census_position(c, fact.prime);
    row.prime = fact.prime;
    row.coefficients = fact.exponents;
    i64 q = 0;
    for (u64 l = 0; l < fact.exponents.size(); ++l)
        if (fact.exponents[l] != 0)
            q += fact.exponents[l] *
                 static_cast<i64>(entry_of(c.eff_primes[l]).index);
    row.q_value = q;
    row.index = static_cast<i64>(entry_of(fact.prime).index);
    row.coefficients[row.target_index] -= 1;
    u64 fp = table.partition_period;
    if (q < row.index || (q - row.index) % static_cast<i64>(fp) != 0)
        throw InternalInconsistency(
            "index-like Q=" + std::to_string(q) + " of prime " +
            std::to_string(fact.prime) + " is not congruent to J=" +
            std::to_string(row.index) + " mod " + std::to_string(fp));
    row.m_value = (q - row.index) / static_cast<i64>(fp);
    row.rhs = row.m_value * static_cast<i64>(fp);
    i64 dot = 0;
    for (u64 l = 0; l < row.coefficients.size(); ++l)
        if (row.coefficients[l] != 0)
            dot += row.coefficients[l] *
                   static_cast<i64>(entry_of(c.eff_primes[l]).index);
    if (dot != row.rhs)
        throw InternalInconsistency("equation row for prime " +
                                    std::to_string(fact.prime) +
                                    " is not satisfied by its index vector");
    u64 pq = pow_mod(table.base % c.target.n2,
                     static_cast<u64>(q) % table.period, c.target.n2);
    row.q_sign = (pq == fact.complement % c.target.n2) ? IndexForm::Residue
                                                       : IndexForm::Complement;
    return row;
}

inline EquationRow build_row(const EvenTarget& t, const IndexTable& table,
                             const ComplementFactorization& fact) {
    return build_row(census(t), table, fact);
}

enum class SystemVariant { Anchored, Summed };

inline const char* to_string(SystemVariant v) {
    return v == SystemVariant::Anchored ? "anchored" : "summed";
}

// The extra (s+1)-th equation. Anchored: the base's own index is 1.
// Summed: all indexes summed; the rhs is the actual sum, so the system
// stays satisfiable, and whether that sum is 1 modulo anything is
// reported separately rather than wished into the rhs.
struct ClosingRow {
    std::vector<i64> coefficients;
    i64 rhs = 0;

    bool operator==(const ClosingRow& other) const {
        return coefficients == other.coefficients && rhs == other.rhs;
    }
};

struct EquationSystem {
    EvenTarget target;
    u64 base = 0;
    SystemVariant variant = SystemVariant::Anchored;
    std::vector<EquationRow> rows; // one per composite complement, by prime
    ClosingRow closing;
    std::optional<u64> anchor_prime; // set for the anchored variant
    std::vector<GoldbachWitness> witnesses; // prime complements, p <= q
    std::vector<u64> unformed; // primes whose row lacked an index
    u64 period = 0;
    u64 partition_period = 0;
    std::optional<u64> index_sum;  // summed variant: actual sum of J
    bool sum_congruence_holds = false; // sum = 1 (mod period)?
    std::optional<u64> sum_m_x;    // (sum - 1) / period when it holds
    u64 rank = 0;
    std::optional<std::vector<rational>> dependency;

    bool operator==(const EquationSystem& other) const {
        return target == other.target && base == other.base &&
               variant == other.variant && rows == other.rows &&
               closing == other.closing &&
               anchor_prime == other.anchor_prime &&
               witnesses == other.witnesses && unformed == other.unformed &&
               period == other.period &&
               partition_period == other.partition_period &&
               index_sum == other.index_sum &&
               sum_congruence_holds == other.sum_congruence_holds &&
               sum_m_x == other.sum_m_x && rank == other.rank &&
               dependency == other.dependency;
    }
};

// Exact rank of the stacked coefficient rows (equation rows plus the
// closing row) over the rationals, with a dependency certificate when
// the rows are linearly dependent: rational weights, not all zero,
// combining the rows (and their right-hand sides) to zero.
inline std::pair<u64, std::optional<std::vector<rational>>> analyze_rank(
    const EquationSystem& system) {
    std::vector<std::vector<rational>> mat;
    std::vector<rational> rhs;
    for (const EquationRow& row : system.rows) {
        mat.emplace_back(row.coefficients.begin(), row.coefficients.end());
        rhs.emplace_back(row.rhs);
    }
    mat.emplace_back(system.closing.coefficients.begin(),
                     system.closing.coefficients.end());
    rhs.emplace_back(system.closing.rhs);

    const u64 nrows = mat.size();
    const u64 ncols = mat.empty() ? 0 : mat[0].size();
    // Augment with the identity so eliminated rows carry their recipe.
    for (u64 r = 0; r < nrows; ++r) {
        mat[r].resize(ncols + nrows, rational(0));
        mat[r][ncols + r] = 1;
    }
    u64 rank = 0;
    for (u64 col = 0; col < ncols && rank < nrows; ++col) {
        u64 pivot = rank;
        while (pivot < nrows && mat[pivot][col] == 0) ++pivot;
        if (pivot == nrows) continue;
        std::swap(mat[rank], mat[pivot]);
        rational inv = mat[rank][col];
        for (u64 c = 0; c < ncols + nrows; ++c) mat[rank][c] /= inv;
        for (u64 r = 0; r < nrows; ++r) {
            if (r == rank || mat[r][col] == 0) continue;
            rational factor = mat[r][col];
            for (u64 c = 0; c < ncols + nrows; ++c)
                mat[r][c] -= factor * mat[rank][c];
        }
        ++rank;
    }
    std::optional<std::vector<rational>> certificate;
    if (rank < nrows) {
        // Row `rank` has a zero coefficient part; its identity part holds
        // the weights that combine the original rows to the zero row.
        std::vector<rational> weights(nrows);
        for (u64 r = 0; r < nrows; ++r) weights[r] = mat[rank][ncols + r];
        std::vector<rational> combo(ncols, rational(0));
        rational combo_rhs(0);
        bool nonzero = false;
        for (u64 r = 0; r < nrows; ++r) {
            if (weights[r] != 0) nonzero = true;
            combo_rhs += weights[r] * rhs[r];
        }
        for (u64 r = 0; r < nrows; ++r) {
            if (weights[r] == 0) continue;
            const EquationRow* row =
                r < system.rows.size() ? &system.rows[r] : nullptr;
            for (u64 c = 0; c < ncols; ++c)
                combo[c] += weights[r] * rational(row ? row->coefficients[c]
                                                      : system.closing
                                                            .coefficients[c]);
        }
        for (const rational& v : combo)
            if (v != 0)
                throw InternalInconsistency(
                    "dependency certificate does not combine rows to zero");
        if (!nonzero || combo_rhs != 0)
            throw InternalInconsistency(
                "dependency certificate is degenerate or inconsistent");
        certificate = std::move(weights);
    }
    return {rank, std::move(certificate)};
}

inline EquationSystem build_system(const EvenTarget& t,
                                   const IndexTable& table,
                                   SystemVariant variant) {
    Census c = census(t);
    EquationSystem system;
    system.target = t;
    system.base = table.base;
    system.period = table.period;
    system.partition_period = table.partition_period;

    u64 reduced = table.base % t.n2;
    bool base_is_eff_prime =
        std::binary_search(c.eff_primes.begin(), c.eff_primes.end(), reduced);
    system.variant = (variant == SystemVariant::Anchored && base_is_eff_prime)
                         ? SystemVariant::Anchored
                         : SystemVariant::Summed;

    for (u64 p : c.eff_primes) {
        ComplementFactorization fact = factor_complement(c, p);
        if (fact.is_goldbach) {
            // Each pair shows up twice (once from each side); keep p < R.
            if (p < fact.complement)
                system.witnesses.push_back(
                    {p, fact.complement, WitnessSource::ComplementPrime});
            continue;
        }
        try {
            system.rows.push_back(build_row(c, table, fact));
        } catch (const MissingIndex&) {
            system.unformed.push_back(p);
        }
    }
    system.closing.coefficients.assign(c.eff_primes.size(), 0);
    if (system.variant == SystemVariant::Anchored) {
        u64 pos = detail::census_position(c, reduced);
        auto it = table.entries.find(reduced);
        if (it == table.entries.end() || it->second.index != 1)
            throw InternalInconsistency(
                "anchored variant: base " + std::to_string(reduced) +
                " does not have index 1 in its own table");
        system.anchor_prime = reduced;
        system.closing.coefficients[pos] = 1;
        system.closing.rhs = 1;
    } else {
        for (auto& coeff : system.closing.coefficients) coeff = 1;
        if (table.missing.empty()) {
            u64 sum = 0;
            for (const auto& [p, e] : table.entries) sum += e.index;
            system.index_sum = sum;
            system.closing.rhs = static_cast<i64>(sum);
            system.sum_congruence_holds =
                sum % table.period == 1 % table.period;
            if (system.sum_congruence_holds && sum >= 1)
                system.sum_m_x = (sum - 1) / table.period;
        } else {
            // Without a full index vector the sum row cannot be stated;
            // a zero row keeps the system well-formed and harmless.
            system.closing.coefficients.assign(c.eff_primes.size(), 0);
            system.closing.rhs = 0;
        }
    }

    auto [rank, certificate] = analyze_rank(system);
    system.rank = rank;
    system.dependency = std::move(certificate);
    return system;
}

}  // namespace effnum
