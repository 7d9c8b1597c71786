#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "effnum/orbit.hpp"

namespace effnum {

// Above this modulus a baby-step table would need too much memory.
inline constexpr u64 kBsgsTargetLimit = 1'000'000'000'000ull;
// Below this modulus the baby table is a flat array indexed by residue.
inline constexpr u64 kBsgsFlatLimit = 1u << 22;

enum class IndexForm {
    Residue,    // p = P^J mod 2N        (p = P^J - (M-1)*2N)
    Complement, // p = -P^J mod 2N       (p = M*2N - P^J)
};

inline const char* to_string(IndexForm f) {
    return f == IndexForm::Residue ? "residue" : "complement";
}

// The index J of an eff-prime: smallest exponent with P^J = +-p (mod 2N).
struct IndexEntry {
    u64 prime = 0;
    u64 index = 0;
    IndexForm form = IndexForm::Residue;

    bool operator==(const IndexEntry& other) const {
        return prime == other.prime && index == other.index &&
               form == other.form;
    }
};

struct IndexTable {
    EvenTarget target;
    u64 base = 0;
    u64 period = 0;           // f
    u64 partition_period = 0; // cycle length of the partition sequence
    std::map<u64, IndexEntry> entries;
    std::vector<u64> missing; // census eff-primes with no index, ascending

    bool operator==(const IndexTable& other) const {
        return target == other.target && base == other.base &&
               period == other.period &&
               partition_period == other.partition_period &&
               entries == other.entries && missing == other.missing;
    }
};

enum class WitnessSource { IndexCollision, ComplementPrime, Sieve, HalfPrime };

inline const char* to_string(WitnessSource s) {
    switch (s) {
        case WitnessSource::IndexCollision: return "index_collision";
        case WitnessSource::ComplementPrime: return "complement_prime";
        case WitnessSource::Sieve: return "sieve";
        case WitnessSource::HalfPrime: return "half_prime";
    }
    return "?";
}

// A verified pair of primes summing to 2N, tagged by discovery method.
struct GoldbachWitness {
    u64 p = 0;
    u64 q = 0;
    WitnessSource source = WitnessSource::Sieve;

    bool operator==(const GoldbachWitness& other) const {
        return p == other.p && q == other.q && source == other.source;
    }
};

// Baby-step giant-step discrete logarithm to a fixed base. Reusable
// across queries; the baby table is built once per (target, base).
class Bsgs {
  public:
    Bsgs(const EvenTarget& t, u64 base, u64 target_limit = kBsgsTargetLimit)
        : t_(t) {
        if (t.n2 > target_limit)
            throw LimitExceeded(
                "bsgs: refusing modulus " + std::to_string(t.n2) +
                " above the configured limit " + std::to_string(target_limit));
        b_ = reduce_unit_base(t, base);
        order_ = mult_order(base, t);
        m_ = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(order_))));
        if (m_ == 0) m_ = 1;
        while (m_ * m_ < order_) ++m_;
        if (t.n2 <= kBsgsFlatLimit) flat_.assign(t.n2, -1);
        u64 x = 1;
        for (u64 i = 0; i < m_ && i < order_; ++i) {
            if (!flat_.empty()) {
                if (flat_[x] < 0) flat_[x] = static_cast<i64>(i);
            } else {
                baby_.emplace(x, i);
            }
            x = mulmod(x, b_, t.n2);
        }
        giant_ = pow_mod(b_, (order_ - m_ % order_) % order_, t.n2);
    }

    u64 order() const { return order_; }

    // Smallest J in [0, order) with base^J = value, if any.
    std::optional<u64> query(u64 value) const {
        if (!is_unit(t_, value % t_.n2))
            throw NotAUnit("dlog: value " + std::to_string(value) +
                           " shares a factor with " + std::to_string(t_.n2));
        u64 cur = value % t_.n2;
        for (u64 j = 0; j * m_ < order_; ++j) {
            std::optional<u64> i = lookup(cur);
            if (i) {
                u64 cand = j * m_ + *i;
                if (cand < order_) return cand;
            }
            cur = mulmod(cur, giant_, t_.n2);
        }
        return std::nullopt;
    }

  private:
    std::optional<u64> lookup(u64 v) const {
        if (!flat_.empty()) {
            i64 i = flat_[v];
            if (i < 0) return std::nullopt;
            return static_cast<u64>(i);
        }
        auto it = baby_.find(v);
        if (it == baby_.end()) return std::nullopt;
        return it->second;
    }

    EvenTarget t_;
    u64 b_ = 0;
    u64 order_ = 0;
    u64 m_ = 0;
    u64 giant_ = 0;
    std::vector<i64> flat_;
    std::unordered_map<u64, u64> baby_;
};

// One-shot discrete log. Prefer a shared Bsgs when querying many values.
inline std::optional<u64> dlog_bsgs(const EvenTarget& t, u64 base, u64 value) {
    return Bsgs(t, base).query(value);
}

namespace detail {

inline std::optional<IndexEntry> index_entry_from(const Bsgs& solver,
                                                  const EvenTarget& t, u64 p) {
    std::optional<u64> res = solver.query(p);
    std::optional<u64> comp = solver.query(t.n2 - p);
    if (!res && !comp) return std::nullopt;
    IndexEntry e;
    e.prime = p;
    if (res && (!comp || *res <= *comp)) {
        // Equality cannot happen (p = -p mod 2N is impossible for odd p);
        // Residue wins the tie anyway so the table stays deterministic.
        e.index = *res;
        e.form = IndexForm::Residue;
    } else {
        e.index = *comp;
        e.form = IndexForm::Complement;
    }
    return e;
}

}  // namespace detail

inline std::optional<IndexEntry> index_of(const EvenTarget& t, u64 base,
                                          u64 p) {
    if (p == 0 || p >= t.n2 || p % 2 == 0 ||
        classify_residue(t, p) != EffClass::EffPrime)
        throw NotEffPrime("index_of: " + std::to_string(p) +
                          " is not an eff-prime of " + std::to_string(t.n2));
    Bsgs solver(t, base);
    return detail::index_entry_from(solver, t, p);
}

inline IndexTable index_table(const EvenTarget& t, u64 base) {
    IndexTable table;
    table.target = t;
    table.base = base;
    Bsgs solver(t, base);
    table.period = solver.order();
    table.partition_period = partition_period(t, base, table.period);
    for (u64 p : census(t).eff_primes) {
        std::optional<IndexEntry> e = detail::index_entry_from(solver, t, p);
        if (e)
            table.entries.emplace(p, *e);
        else
            table.missing.push_back(p);
    }
    return table;
}

// Distinct eff-primes sharing an index sum to 2N (p = P^J - (M-1)2N and
// q = M'2N - P^J add up to a multiple of 2N inside (0, 4N)). Each pair is
// re-verified before being reported; a failure is a library defect.
inline std::vector<GoldbachWitness> find_collisions(const IndexTable& table) {
    std::map<u64, std::vector<const IndexEntry*>> by_index;
    for (const auto& [p, e] : table.entries) by_index[e.index].push_back(&e);
    std::vector<GoldbachWitness> witnesses;
    for (const auto& [j, group] : by_index) {
        if (group.size() == 1) continue;
        if (group.size() > 2)
            throw InternalInconsistency(
                "more than two eff-primes share index " + std::to_string(j));
        const IndexEntry* a = group[0];
        const IndexEntry* b = group[1];
        if (a->form == b->form || a->prime + b->prime != table.target.n2 ||
            !is_prime(a->prime) || !is_prime(b->prime))
            throw InternalInconsistency(
                "index collision at J=" + std::to_string(j) +
                " failed verification for " + std::to_string(a->prime) +
                " and " + std::to_string(b->prime));
        witnesses.push_back({std::min(a->prime, b->prime),
                             std::max(a->prime, b->prime),
                             WitnessSource::IndexCollision});
    }
    std::sort(witnesses.begin(), witnesses.end(),
              [](const GoldbachWitness& x, const GoldbachWitness& y) {
                  return x.p < y.p;
              });
    return witnesses;
}

namespace detail {

// Walks the orbit of (reduced) base b marking partition lows in scratch;
// true when all F partitions are hit. An orbit of length f < F cannot
// cover, so callers may skip the walk entirely in that case.
class CoverageScratch {
  public:
    explicit CoverageScratch(const EvenTarget& t)
        : t_(t), stamp_(t.half / 2 + 1, 0) {}

    bool covers(u64 b, u64 f) {
        if (f < t_.partition_count) return false;
        ++epoch_;
        u64 hit = 0;
        u64 r = 1;
        for (u64 j = 0; j < f; ++j) {
            u64 low = std::min(r, t_.n2 - r);
            u64 slot = (low - 1) / 2;
            if (stamp_[slot] != epoch_) {
                stamp_[slot] = epoch_;
                if (++hit == t_.partition_count) return true;
            }
            r = mulmod(r, b, t_.n2);
        }
        return false;
    }

  private:
    EvenTarget t_;
    std::vector<u64> stamp_;
    u64 epoch_ = 0;
};

// Census eff-primes and eff-products merged into one ascending list.
inline std::vector<u64> eff_number_candidates(const Census& c) {
    std::vector<u64> merged;
    merged.reserve(c.eff_primes.size() + c.eff_products.size());
    std::merge(c.eff_primes.begin(), c.eff_primes.end(),
               c.eff_products.begin(), c.eff_products.end(),
               std::back_inserter(merged));
    return merged;
}

}  // namespace detail

// All eff-numbers (primes and products, ascending) whose orbit covers
// every eff-partition. search_limit bounds how many candidates are
// examined; 0 means all of them. An empty result is a meaningful finding.
inline std::vector<u64> coverage_bases(const EvenTarget& t, u64 search_limit) {
    Census c = census(t);
    detail::CoverageScratch scratch(t);
    std::vector<u64> found;
    u64 examined = 0;
    for (u64 b : detail::eff_number_candidates(c)) {
        if (search_limit != 0 && examined == search_limit) break;
        ++examined;
        if (scratch.covers(b, mult_order(b, t))) found.push_back(b);
    }
    return found;
}

inline std::optional<u64> first_coverage_base(const EvenTarget& t) {
    Census c = census(t);
    detail::CoverageScratch scratch(t);
    for (u64 b : detail::eff_number_candidates(c))
        if (scratch.covers(b, mult_order(b, t))) return b;
    return std::nullopt;
}

// Per-base coverage audit: first covering base (if any) and whether any
// base contradicts the claim "order equals F exactly when the orbit
// covers". Coverage is always decided by the walk, never by that claim.
struct CoverageScan {
    std::optional<u64> first_base;
    bool criterion_mismatch = false;
};

inline CoverageScan scan_coverage(const EvenTarget& t) {
    Census c = census(t);
    detail::CoverageScratch scratch(t);
    CoverageScan result;
    for (u64 b : detail::eff_number_candidates(c)) {
        u64 f = mult_order(b, t);
        if (f < t.partition_count) continue; // cannot cover, claim agrees
        bool covered = scratch.covers(b, f);
        if (covered != (f == t.partition_count))
            result.criterion_mismatch = true;
        if (covered && !result.first_base) result.first_base = b;
    }
    return result;
}

// Probe of the all-eff-primes product base: its period, per-prime index
// table, and whether the indexes sum to 1 modulo the period. The probe
// reports; nothing downstream assumes its congruence holds.
struct CompositeBaseProbe {
    EvenTarget target;
    std::vector<u64> factor_multiset; // the census eff-primes, each once
    u64 base_residue = 0;
    u64 period = 0;
    IndexTable per_prime;
    bool degenerate = false; // product reduced to 1; nothing to walk
    std::optional<u64> index_sum; // sum of J over entries, when none missing
    bool sum_congruence_holds = false;
    std::optional<u64> probe_m_x; // (sum - 1) / period, when it holds

    bool operator==(const CompositeBaseProbe& other) const {
        return target == other.target &&
               factor_multiset == other.factor_multiset &&
               base_residue == other.base_residue && period == other.period &&
               per_prime == other.per_prime &&
               degenerate == other.degenerate &&
               index_sum == other.index_sum &&
               sum_congruence_holds == other.sum_congruence_holds &&
               probe_m_x == other.probe_m_x;
    }
};

inline CompositeBaseProbe composite_base_probe(const EvenTarget& t) {
    Census c = census(t);
    if (c.s == 0)
        throw DomainError("composite_base_probe: " + std::to_string(t.n2) +
                          " has no eff-primes");
    CompositeBaseProbe probe;
    probe.target = t;
    probe.factor_multiset = c.eff_primes;
    u64 b = 1;
    for (u64 p : c.eff_primes) b = mulmod(b, p, t.n2);
    probe.base_residue = b;
    if (b == 1) {
        probe.degenerate = true;
        probe.period = 1;
        probe.per_prime.target = t;
        probe.per_prime.base = 1;
        probe.per_prime.period = 1;
        probe.per_prime.partition_period = 1;
        probe.per_prime.missing = c.eff_primes;
        return probe;
    }
    probe.per_prime = index_table(t, b);
    probe.period = probe.per_prime.period;
    if (probe.per_prime.missing.empty()) {
        u64 sum = 0;
        for (const auto& [p, e] : probe.per_prime.entries) sum += e.index;
        probe.index_sum = sum;
        probe.sum_congruence_holds = sum % probe.period == 1 % probe.period;
        if (probe.sum_congruence_holds && sum >= 1)
            probe.probe_m_x = (sum - 1) / probe.period;
    }
    return probe;
}

}  // namespace effnum
