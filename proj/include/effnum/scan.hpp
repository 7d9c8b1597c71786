#pragma once

#include <atomic>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>

#include "effnum/index.hpp"
#include "effnum/sieve.hpp"

namespace effnum {

// Smallest prime p with 2N - p also prime, scanning p = 3, 5, 7, ...
// (2 never works: 2N - 2 is even and >= 6). Templated on the sieve so
// tests can inject a fake one and exercise the absence path.
template <typename SieveT>
std::optional<GoldbachWitness> goldbach_witness_sieve(const EvenTarget& t,
                                                      const SieveT& sieve) {
    for (u64 p = 3; p <= t.half; p += 2) {
        if (!sieve.is_prime(p) || !sieve.is_prime(t.n2 - p)) continue;
        return GoldbachWitness{p, t.n2 - p,
                               p == t.half ? WitnessSource::HalfPrime
                                           : WitnessSource::Sieve};
    }
    return std::nullopt;
}

// Condensed composite-base probe outcome carried by audit records.
struct ProbeSummary {
    u64 period = 0;
    u64 missing_count = 0;
    bool sum_congruence_holds = false;

    bool operator==(const ProbeSummary& other) const {
        return period == other.period &&
               missing_count == other.missing_count &&
               sum_congruence_holds == other.sum_congruence_holds;
    }
};

// Everything the auditor learned about one even number.
struct AuditRecord {
    u64 n2 = 0;
    u64 s = 0;             // eff-prime count
    u64 product_count = 0; // eff-product count
    bool has_sieve_witness = false;
    std::optional<GoldbachWitness> smallest_witness;
    std::optional<u64> coverage_base_found; // full mode: first covering base
    u64 collision_witness_count = 0;        // under that base
    std::optional<ProbeSummary> composite_probe_summary; // full mode
    // True when some base's orbit coverage contradicts "covers iff the
    // order equals F". Only evaluated in full mode.
    bool paper_criterion_mismatch = false;

    bool operator==(const AuditRecord& other) const {
        return n2 == other.n2 && s == other.s &&
               product_count == other.product_count &&
               has_sieve_witness == other.has_sieve_witness &&
               smallest_witness == other.smallest_witness &&
               coverage_base_found == other.coverage_base_found &&
               collision_witness_count == other.collision_witness_count &&
               composite_probe_summary == other.composite_probe_summary &&
               paper_criterion_mismatch == other.paper_criterion_mismatch;
    }
};

struct ScanOptions {
    bool full = true; // census + coverage + collisions + probe per value
    u64 jobs = 1;     // worker threads for full mode
    // Optional cache probe: a hit skips recomputation entirely. Must be
    // safe to call from several threads at once.
    std::function<std::optional<AuditRecord>(u64 n2)> cached;
};

// Sink for streamed records; from_cache says the record was replayed,
// not computed, so callers don't re-store it.
using RecordSink = std::function<void(const AuditRecord&, bool from_cache)>;

namespace detail {

// Full audit of a single even number against a sieve covering it.
template <typename SieveT>
AuditRecord audit_full(u64 n2, const SieveT& sieve) {
    EvenTarget t = make_even_target(n2);
    Census c = census(t);
    AuditRecord rec;
    rec.n2 = n2;
    rec.s = c.s;
    rec.product_count = c.eff_products.size();
    rec.smallest_witness = goldbach_witness_sieve(t, sieve);
    rec.has_sieve_witness = rec.smallest_witness.has_value();

    CoverageScan coverage = scan_coverage(t);
    rec.coverage_base_found = coverage.first_base;
    rec.paper_criterion_mismatch = coverage.criterion_mismatch;
    if (coverage.first_base) {
        IndexTable table = index_table(t, *coverage.first_base);
        std::vector<GoldbachWitness> collisions = find_collisions(table);
        for (const GoldbachWitness& w : collisions)
            if (!sieve.is_prime(w.p) || !sieve.is_prime(w.q) ||
                w.p + w.q != n2)
                throw InternalInconsistency(
                    "collision witness " + std::to_string(w.p) + "+" +
                    std::to_string(w.q) + " failed the sieve cross-check");
        rec.collision_witness_count = collisions.size();
    }

    CompositeBaseProbe probe = composite_base_probe(t);
    rec.composite_probe_summary =
        ProbeSummary{probe.period,
                     static_cast<u64>(probe.per_prime.missing.size()),
                     probe.sum_congruence_holds};
    return rec;
}

}  // namespace detail

// Streams one AuditRecord per even number in [lo, hi] to `sink`, in
// order. Full mode fans work out to options.jobs threads; emission stays
// serialized and deterministic. A missing sieve witness is emitted and
// then raised as SieveWitnessAbsence: the one result that must never
// pass silently.
template <typename SieveT>
void scan_stream(u64 lo, u64 hi, const ScanOptions& options,
                 const SieveT& sieve, const RecordSink& sink) {
    if (lo % 2 != 0 || hi % 2 != 0 || lo < 8 || lo > hi)
        throw DomainError("scan range must satisfy 8 <= lo <= hi with both "
                          "even; got [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    const u64 count = (hi - lo) / 2 + 1;

    auto finish = [&](const AuditRecord& rec, bool from_cache) {
        sink(rec, from_cache);
        if (!rec.has_sieve_witness)
            throw SieveWitnessAbsence(
                rec.n2, "no prime pair sums to " + std::to_string(rec.n2) +
                            ": a Goldbach counterexample candidate; "
                            "verify independently");
    };
    auto lookup = [&](u64 n2) -> std::optional<AuditRecord> {
        if (!options.cached) return std::nullopt;
        return options.cached(n2);
    };

    if (!options.full) {
        // Sieve-only: census counts come from prime counting, not
        // enumeration. s counts odd primes below 2N-1 not dividing 2N;
        // products fill the rest of the phi(2N) units.
        u64 odd = 1;
        u64 primes_below = 0; // odd primes <= odd
        for (u64 n2 = lo; n2 <= hi; n2 += 2) {
            while (odd + 2 <= n2 - 2) {
                odd += 2;
                if (sieve.is_prime(odd)) ++primes_below;
            }
            if (std::optional<AuditRecord> hit = lookup(n2)) {
                finish(*hit, true);
                continue;
            }
            u64 omega_odd = 0;
            u64 m = n2;
            while (m % 2 == 0) m /= 2;
            for (u64 p = 3; p * p <= m; p += 2) {
                if (m % p != 0) continue;
                ++omega_odd;
                while (m % p == 0) m /= p;
            }
            if (m > 1) ++omega_odd;
            AuditRecord rec;
            rec.n2 = n2;
            rec.s = primes_below - omega_odd;
            rec.product_count = totient(n2) - 2 - rec.s;
            EvenTarget t = make_even_target(n2);
            rec.smallest_witness = goldbach_witness_sieve(t, sieve);
            rec.has_sieve_witness = rec.smallest_witness.has_value();
            finish(rec, false);
        }
        return;
    }

    if (options.jobs <= 1) {
        for (u64 n2 = lo; n2 <= hi; n2 += 2) {
            if (std::optional<AuditRecord> hit = lookup(n2))
                finish(*hit, true);
            else
                finish(detail::audit_full(n2, sieve), false);
        }
        return;
    }

    std::vector<std::optional<std::pair<AuditRecord, bool>>> results(count);
    std::atomic<u64> next{0};
    std::mutex mu;
    std::condition_variable ready;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            u64 i = next.fetch_add(1);
            if (i >= count) return;
            try {
                u64 n2 = lo + 2 * i;
                std::optional<AuditRecord> hit = lookup(n2);
                std::pair<AuditRecord, bool> out =
                    hit ? std::pair<AuditRecord, bool>(std::move(*hit), true)
                        : std::pair<AuditRecord, bool>(
                              detail::audit_full(n2, sieve), false);
                std::lock_guard<std::mutex> lock(mu);
                results[i] = std::move(out);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) failure = std::current_exception();
                next.store(count); // drain remaining work
            }
            ready.notify_all();
        }
    };
    std::vector<std::thread> pool;
    for (u64 j = 0; j < options.jobs; ++j) pool.emplace_back(worker);

    u64 emitted = 0;
    {
        std::unique_lock<std::mutex> lock(mu);
        while (emitted < count) {
            ready.wait(lock, [&] {
                return failure || results[emitted].has_value();
            });
            if (failure) break;
            std::pair<AuditRecord, bool> rec = std::move(*results[emitted]);
            results[emitted].reset();
            ++emitted;
            lock.unlock();
            try {
                finish(rec.first, rec.second);
            } catch (...) {
                next.store(count);
                for (std::thread& th : pool) th.join();
                throw;
            }
            lock.lock();
        }
    }
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

template <typename SieveT>
std::vector<AuditRecord> scan_range(u64 lo, u64 hi,
                                    const ScanOptions& options,
                                    const SieveT& sieve) {
    std::vector<AuditRecord> records;
    scan_stream<SieveT>(lo, hi, options, sieve,
                        [&](const AuditRecord& rec, bool) {
                            records.push_back(rec);
                        });
    return records;
}

// Aggregate view over a scanned range.
struct AuditSummary {
    u64 lo = 0;
    u64 hi = 0;
    u64 evens = 0;
    u64 sieve_witness_count = 0;
    u64 coverage_found_count = 0;
    std::vector<u64> coverage_absent; // full mode: 2N with no covering base
    u64 criterion_mismatch_count = 0;
    u64 pigeonhole_count = 0; // s > product_count
    u64 collision_witness_total = 0;
    bool full = false;

    bool operator==(const AuditSummary& other) const {
        return lo == other.lo && hi == other.hi && evens == other.evens &&
               sieve_witness_count == other.sieve_witness_count &&
               coverage_found_count == other.coverage_found_count &&
               coverage_absent == other.coverage_absent &&
               criterion_mismatch_count == other.criterion_mismatch_count &&
               pigeonhole_count == other.pigeonhole_count &&
               collision_witness_total == other.collision_witness_total &&
               full == other.full;
    }
};

// Incremental aggregation, so streams never need to be held in memory.
class SummaryBuilder {
  public:
    SummaryBuilder(u64 lo, u64 hi, bool full) {
        summary_.lo = lo;
        summary_.hi = hi;
        summary_.full = full;
    }

    void add(const AuditRecord& rec) {
        ++summary_.evens;
        if (rec.has_sieve_witness) ++summary_.sieve_witness_count;
        if (rec.coverage_base_found)
            ++summary_.coverage_found_count;
        else if (summary_.full)
            summary_.coverage_absent.push_back(rec.n2);
        if (rec.paper_criterion_mismatch)
            ++summary_.criterion_mismatch_count;
        if (rec.s > rec.product_count) ++summary_.pigeonhole_count;
        summary_.collision_witness_total += rec.collision_witness_count;
    }

    const AuditSummary& result() const { return summary_; }

  private:
    AuditSummary summary_;
};

inline AuditSummary summarize(u64 lo, u64 hi, bool full,
                              const std::vector<AuditRecord>& records) {
    SummaryBuilder builder(lo, hi, full);
    for (const AuditRecord& rec : records) builder.add(rec);
    return builder.result();
}

template <typename SieveT>
AuditSummary audit_claims(u64 lo, u64 hi, const ScanOptions& options,
                          const SieveT& sieve) {
    return summarize(lo, hi, options.full,
                     scan_range(lo, hi, options, sieve));
}

}  // namespace effnum
