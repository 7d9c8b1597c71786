// Command-line front end for the effective-number toolkit.

#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "effnum/report.hpp"

namespace {

using namespace effnum;

enum class Format { Text, Csv, Json };

Format parse_format(const std::string& s) {
    if (s == "text") return Format::Text;
    if (s == "csv") return Format::Csv;
    return Format::Json;
}

void cmd_classify(u64 n2, Format format) {
    Census c = census(make_even_target(n2));
    switch (format) {
        case Format::Text: write_census_text(std::cout, c); break;
        case Format::Csv: write_census_csv(std::cout, c); break;
        case Format::Json: std::cout << json(c).dump() << "\n"; break;
    }
}

void cmd_orbit(u64 n2, u64 base, i64 max_j, Format format) {
    EvenTarget t = make_even_target(n2);
    u64 period = mult_order(base, t);
    u64 fp = partition_period(t, base, period);
    u64 j_max = max_j >= 0 ? static_cast<u64>(max_j)
                           : std::min(period, kDefaultMaxJ);
    std::vector<PowerStep> rows = orbit_table(t, base, j_max);
    // Coverage needs a full walk of the cycle plus scratch linear in the
    // target; skip it when either would dwarf the requested table.
    std::optional<bool> covers;
    if (t.n2 <= 10'000'000 && period <= 100'000'000) {
        detail::CoverageScratch scratch(t);
        covers = scratch.covers(base % t.n2, period);
    }
    switch (format) {
        case Format::Text:
            write_orbit_header_text(std::cout, t, base, period, fp,
                                    covers.value_or(false));
            for (const PowerStep& s : rows)
                write_orbit_row_text(std::cout, t, s);
            break;
        case Format::Csv:
            write_orbit_csv(std::cout, rows);
            break;
        case Format::Json: {
            json j{{"target", t},       {"base", base},
                   {"period", period},  {"partition_period", fp},
                   {"covers_all", covers}, {"max_j", j_max},
                   {"steps", rows}};
            std::cout << j.dump() << "\n";
            break;
        }
    }
}

void cmd_indexes(u64 n2, u64 base, Format format) {
    EvenTarget t = make_even_target(n2);
    IndexTable table = index_table(t, base);
    std::vector<GoldbachWitness> collisions = find_collisions(table);
    switch (format) {
        case Format::Text:
            write_indexes_text(std::cout, table, collisions);
            break;
        case Format::Csv:
            write_indexes_csv(std::cout, table);
            break;
        case Format::Json: {
            json informational = json::array();
            informational.push_back(
                {{"value", 1}, {"index", 0}, {"form", "residue"}});
            informational.push_back({{"value", t.n2 - 1},
                                     {"index", 0},
                                     {"form", "complement"}});
            json j{{"table", table},
                   {"informational", informational},
                   {"collisions", collisions}};
            std::cout << j.dump() << "\n";
            break;
        }
    }
}

void cmd_system(u64 n2, u64 base, const std::string& variant, Format format) {
    EvenTarget t = make_even_target(n2);
    IndexTable table = index_table(t, base);
    EquationSystem system = build_system(
        t, table,
        variant == "summed" ? SystemVariant::Summed : SystemVariant::Anchored);
    switch (format) {
        case Format::Text: write_system_text(std::cout, system); break;
        case Format::Csv: write_system_csv(std::cout, system); break;
        case Format::Json:
            std::cout << json(system).dump() << "\n";
            break;
    }
}

void cmd_probe(u64 n2, Format format) {
    CompositeBaseProbe probe = composite_base_probe(make_even_target(n2));
    switch (format) {
        case Format::Text: write_probe_text(std::cout, probe); break;
        case Format::Csv: write_probe_csv(std::cout, probe); break;
        case Format::Json:
            std::cout << json(probe).dump() << "\n";
            break;
    }
}

// scan: streamed records plus a closing summary. audit: the same stream
// with the summary as the headline result. CSV keeps stdout machine-pure
// and sends the summary to stderr.
void cmd_scan(u64 lo, u64 hi, bool sieve_only, bool full_requested, u64 jobs,
              const std::string& cache_path, u64 sieve_limit, Format format,
              bool audit) {
    bool full = hi <= 1'000'000; // large ranges default to sieve-only
    if (sieve_only) full = false;
    if (full_requested) full = true;

    Sieve sieve(hi, sieve_limit);
    ScanOptions options;
    options.full = full;
    options.jobs = jobs;
    std::unique_ptr<AuditCache> cache;
    if (!cache_path.empty()) {
        cache = std::make_unique<AuditCache>(cache_path);
        options.cached = [&cache, full](u64 n2) {
            return cache->lookup(n2, full);
        };
    }

    SummaryBuilder builder(lo, hi, full);
    if (format == Format::Csv) write_record_csv_header(std::cout);
    auto sink = [&](const AuditRecord& rec, bool from_cache) {
        builder.add(rec);
        if (cache && !from_cache) cache->store(rec, full);
        switch (format) {
            case Format::Text:
                write_record_text(std::cout, rec, full);
                break;
            case Format::Csv:
                write_record_csv(std::cout, rec);
                break;
            case Format::Json:
                std::cout << json(rec).dump() << "\n";
                break;
        }
    };
    try {
        scan_stream(lo, hi, options, sieve, sink);
    } catch (const SieveWitnessAbsence&) {
        // The offending record has already been emitted (and cached);
        // surface the summary before the distinguished exit.
        write_summary_text(std::cerr, builder.result());
        throw;
    }

    const AuditSummary& summary = builder.result();
    switch (format) {
        case Format::Text:
            if (audit)
                write_summary_text(std::cout, summary);
            else
                std::cout << "scanned " << summary.evens
                          << " evens, sieve witnesses "
                          << summary.sieve_witness_count << "/"
                          << summary.evens << "\n";
            break;
        case Format::Csv:
            write_summary_text(std::cerr, summary);
            break;
        case Format::Json:
            std::cout << json{{"summary", summary}}.dump() << "\n";
            break;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"effective-number toolkit: classification, power orbits, "
                 "index tables, equation systems, and Goldbach range audits"};
    app.require_subcommand(1);

    std::string format = "text";
    u64 jobs = 1;
    i64 max_j = -1;
    std::string cache_path;
    u64 sieve_limit = effnum::kDefaultSieveLimit;
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    app.add_option("--jobs", jobs, "worker threads for scans")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-j", max_j,
                   "last exponent of the orbit table (default: the period, "
                   "capped at 10000)");
    app.add_option("--cache", cache_path, "append-only audit record cache");
    app.add_option("--sieve-limit", sieve_limit,
                   "largest sieve the scanner may allocate");

    effnum::u64 n2 = 0, base = 0, lo = 0, hi = 0;
    std::string variant = "anchored";
    bool sieve_only = false, full = false;

    CLI::App* classify = app.add_subcommand(
        "classify", "eff-prime / eff-product census of one even number");
    classify->add_option("n2", n2, "even number > 6")->required();
    classify->fallthrough();

    CLI::App* orbit = app.add_subcommand(
        "orbit", "power sequence P^j mod 2N with exact multipliers");
    orbit->add_option("n2", n2, "even number > 6")->required();
    orbit->add_option("base", base, "orbit base P")->required();
    orbit->fallthrough();

    CLI::App* indexes = app.add_subcommand(
        "indexes", "index J of every eff-prime under a base, plus collisions");
    indexes->add_option("n2", n2, "even number > 6")->required();
    indexes->add_option("base", base, "index base P")->required();
    indexes->fallthrough();

    CLI::App* system = app.add_subcommand(
        "system", "complement-factorization equation system and its rank");
    system->add_option("n2", n2, "even number > 6")->required();
    system->add_option("base", base, "index base P")->required();
    system->add_option("--variant", variant, "closing row variant")
        ->check(CLI::IsMember({"anchored", "summed"}));
    system->fallthrough();

    CLI::App* probe = app.add_subcommand(
        "probe", "composite base built from all eff-primes, probed");
    probe->add_option("n2", n2, "even number > 6")->required();
    probe->fallthrough();

    CLI::App* scan = app.add_subcommand(
        "scan", "audit every even number in a range, streaming records");
    scan->add_option("lo", lo, "range start (even, >= 8)")->required();
    scan->add_option("hi", hi, "range end (even)")->required();
    CLI::Option* so = scan->add_flag("--sieve-only", sieve_only,
                                     "skip index analyses");
    scan->add_flag("--full", full, "force full index analyses")
        ->excludes(so);
    scan->fallthrough();

    CLI::App* audit = app.add_subcommand(
        "audit", "scan a range and aggregate coverage and collision statistics");
    audit->add_option("lo", lo, "range start (even, >= 8)")->required();
    audit->add_option("hi", hi, "range end (even)")->required();
    CLI::Option* aso = audit->add_flag("--sieve-only", sieve_only,
                                       "skip index analyses");
    audit->add_flag("--full", full, "force full index analyses")
        ->excludes(aso);
    audit->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // help/version exit clean; errors are usage
    }

    try {
        Format fmt = parse_format(format);
        if (classify->parsed()) cmd_classify(n2, fmt);
        if (orbit->parsed()) cmd_orbit(n2, base, max_j, fmt);
        if (indexes->parsed()) cmd_indexes(n2, base, fmt);
        if (system->parsed()) cmd_system(n2, base, variant, fmt);
        if (probe->parsed()) cmd_probe(n2, fmt);
        if (scan->parsed())
            cmd_scan(lo, hi, sieve_only, full, jobs, cache_path, sieve_limit,
                     fmt, false);
        if (audit->parsed())
            cmd_scan(lo, hi, sieve_only, full, jobs, cache_path, sieve_limit,
                     fmt, true);
    } catch (const effnum::SieveWitnessAbsence& e) {
        std::cerr << "sieve witness absent: " << e.what() << "\n";
        return 3;
    } catch (const effnum::InternalInconsistency& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return 1;
    } catch (const effnum::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
