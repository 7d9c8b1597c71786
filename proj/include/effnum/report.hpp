#pragma once

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "effnum/linsys.hpp"
#include "effnum/scan.hpp"

namespace nlohmann {

template <typename T>
struct adl_serializer<std::optional<T>> {
    template <typename BasicJsonType>
    static void to_json(BasicJsonType& j, const std::optional<T>& opt) {
        if (opt)
            j = *opt;
        else
            j = nullptr;
    }
    template <typename BasicJsonType>
    static void from_json(const BasicJsonType& j, std::optional<T>& opt) {
        if (j.is_null())
            opt = std::nullopt;
        else
            opt = j.template get<T>();
    }
};

// Unbounded integers travel as decimal strings so consumers never overflow.
template <>
struct adl_serializer<effnum::bigint> {
    template <typename BasicJsonType>
    static void to_json(BasicJsonType& j, const effnum::bigint& v) {
        j = v.str();
    }
    template <typename BasicJsonType>
    static void from_json(const BasicJsonType& j, effnum::bigint& v) {
        v = effnum::bigint(j.template get<std::string>());
    }
};

template <>
struct adl_serializer<effnum::rational> {
    template <typename BasicJsonType>
    static void to_json(BasicJsonType& j, const effnum::rational& v) {
        std::ostringstream out;
        out << v;
        j = out.str();
    }
    template <typename BasicJsonType>
    static void from_json(const BasicJsonType& j, effnum::rational& v) {
        v = effnum::rational(j.template get<std::string>());
    }
};

}  // namespace nlohmann

namespace effnum {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- enums

inline void to_json(json& j, const EffClass& c) { j = to_string(c); }
inline void from_json(const json& j, EffClass& c) {
    std::string s = j.get<std::string>();
    if (s == "shared_factor") c = EffClass::SharedFactor;
    else if (s == "one") c = EffClass::One;
    else if (s == "boundary") c = EffClass::Boundary;
    else if (s == "eff_prime") c = EffClass::EffPrime;
    else if (s == "eff_product") c = EffClass::EffProduct;
    else throw DomainError("unknown eff class '" + s + "'");
}

inline void to_json(json& j, const IndexForm& f) { j = to_string(f); }
inline void from_json(const json& j, IndexForm& f) {
    std::string s = j.get<std::string>();
    if (s == "residue") f = IndexForm::Residue;
    else if (s == "complement") f = IndexForm::Complement;
    else throw DomainError("unknown index form '" + s + "'");
}

inline void to_json(json& j, const WitnessSource& s) { j = to_string(s); }
inline void from_json(const json& j, WitnessSource& s) {
    std::string v = j.get<std::string>();
    if (v == "index_collision") s = WitnessSource::IndexCollision;
    else if (v == "complement_prime") s = WitnessSource::ComplementPrime;
    else if (v == "sieve") s = WitnessSource::Sieve;
    else if (v == "half_prime") s = WitnessSource::HalfPrime;
    else throw DomainError("unknown witness source '" + v + "'");
}

inline void to_json(json& j, const SystemVariant& v) { j = to_string(v); }
inline void from_json(const json& j, SystemVariant& v) {
    std::string s = j.get<std::string>();
    if (s == "anchored") v = SystemVariant::Anchored;
    else if (s == "summed") v = SystemVariant::Summed;
    else throw DomainError("unknown system variant '" + s + "'");
}

// ----------------------------------------------------------- structures

inline void to_json(json& j, const EvenTarget& t) {
    j = json{{"n2", t.n2},
             {"half", t.half},
             {"totient", t.totient},
             {"partition_count", t.partition_count}};
}
inline void from_json(const json& j, EvenTarget& t) {
    t = make_even_target(j.at("n2").get<u64>());
    if (j.at("half").get<u64>() != t.half ||
        j.at("totient").get<u64>() != t.totient ||
        j.at("partition_count").get<u64>() != t.partition_count)
        throw DomainError("target record for " + std::to_string(t.n2) +
                          " carries inconsistent derived constants");
}

inline void to_json(json& j, const EffPartition& p) {
    j = json{{"low", p.low}, {"high", p.high}};
}
inline void from_json(const json& j, EffPartition& p) {
    p.low = j.at("low").get<u64>();
    p.high = j.at("high").get<u64>();
}

inline void to_json(json& j, const Census& c) {
    j = json{{"target", c.target},
             {"eff_primes", c.eff_primes},
             {"eff_products", c.eff_products},
             {"s", c.s},
             {"boundary_is_prime", c.boundary_is_prime}};
}
inline void from_json(const json& j, Census& c) {
    j.at("target").get_to(c.target);
    j.at("eff_primes").get_to(c.eff_primes);
    j.at("eff_products").get_to(c.eff_products);
    j.at("s").get_to(c.s);
    j.at("boundary_is_prime").get_to(c.boundary_is_prime);
    if (c.s != c.eff_primes.size())
        throw DomainError("census record: s disagrees with eff_primes");
}

inline void to_json(json& j, const PowerStep& s) {
    j = json{{"base", s.base},
             {"exponent", s.exponent},
             {"residue", s.residue},
             {"multiplier", s.multiplier},
             {"low_addend", s.low_addend},
             {"high_addend", s.high_addend}};
}
inline void from_json(const json& j, PowerStep& s) {
    j.at("base").get_to(s.base);
    j.at("exponent").get_to(s.exponent);
    j.at("residue").get_to(s.residue);
    j.at("multiplier").get_to(s.multiplier);
    j.at("low_addend").get_to(s.low_addend);
    j.at("high_addend").get_to(s.high_addend);
}

inline void to_json(json& j, const Orbit& o) {
    j = json{{"target", o.target},
             {"base", o.base},
             {"period", o.period},
             {"partition_period", o.partition_period},
             {"steps", o.steps},
             {"partitions_hit", o.partitions_hit},
             {"covers_all", o.covers_all}};
}
inline void from_json(const json& j, Orbit& o) {
    j.at("target").get_to(o.target);
    j.at("base").get_to(o.base);
    j.at("period").get_to(o.period);
    j.at("partition_period").get_to(o.partition_period);
    j.at("steps").get_to(o.steps);
    j.at("partitions_hit").get_to(o.partitions_hit);
    j.at("covers_all").get_to(o.covers_all);
}

inline void to_json(json& j, const IndexEntry& e) {
    j = json{{"prime", e.prime}, {"index", e.index}, {"form", e.form}};
}
inline void from_json(const json& j, IndexEntry& e) {
    j.at("prime").get_to(e.prime);
    j.at("index").get_to(e.index);
    j.at("form").get_to(e.form);
}

inline void to_json(json& j, const IndexTable& t) {
    std::vector<IndexEntry> entries;
    for (const auto& [p, e] : t.entries) entries.push_back(e);
    j = json{{"target", t.target},
             {"base", t.base},
             {"period", t.period},
             {"partition_period", t.partition_period},
             {"entries", entries},
             {"missing", t.missing}};
}
inline void from_json(const json& j, IndexTable& t) {
    j.at("target").get_to(t.target);
    j.at("base").get_to(t.base);
    j.at("period").get_to(t.period);
    j.at("partition_period").get_to(t.partition_period);
    t.entries.clear();
    for (const IndexEntry& e :
         j.at("entries").get<std::vector<IndexEntry>>())
        t.entries.emplace(e.prime, e);
    j.at("missing").get_to(t.missing);
}

inline void to_json(json& j, const GoldbachWitness& w) {
    j = json{{"p", w.p}, {"q", w.q}, {"source", w.source}};
}
inline void from_json(const json& j, GoldbachWitness& w) {
    j.at("p").get_to(w.p);
    j.at("q").get_to(w.q);
    j.at("source").get_to(w.source);
}

inline void to_json(json& j, const CompositeBaseProbe& p) {
    j = json{{"target", p.target},
             {"factor_multiset", p.factor_multiset},
             {"base_residue", p.base_residue},
             {"period", p.period},
             {"per_prime", p.per_prime},
             {"degenerate", p.degenerate},
             {"index_sum", p.index_sum},
             {"sum_congruence_holds", p.sum_congruence_holds},
             {"probe_m_x", p.probe_m_x}};
}
inline void from_json(const json& j, CompositeBaseProbe& p) {
    j.at("target").get_to(p.target);
    j.at("factor_multiset").get_to(p.factor_multiset);
    j.at("base_residue").get_to(p.base_residue);
    j.at("period").get_to(p.period);
    j.at("per_prime").get_to(p.per_prime);
    j.at("degenerate").get_to(p.degenerate);
    j.at("index_sum").get_to(p.index_sum);
    j.at("sum_congruence_holds").get_to(p.sum_congruence_holds);
    j.at("probe_m_x").get_to(p.probe_m_x);
}

inline void to_json(json& j, const ComplementFactorization& f) {
    j = json{{"prime", f.prime},
             {"complement", f.complement},
             {"is_goldbach", f.is_goldbach},
             {"exponents", f.exponents}};
}
inline void from_json(const json& j, ComplementFactorization& f) {
    j.at("prime").get_to(f.prime);
    j.at("complement").get_to(f.complement);
    j.at("is_goldbach").get_to(f.is_goldbach);
    j.at("exponents").get_to(f.exponents);
}

inline void to_json(json& j, const EquationRow& r) {
    j = json{{"target_index", r.target_index},
             {"prime", r.prime},
             {"coefficients", r.coefficients},
             {"q_value", r.q_value},
             {"m_value", r.m_value},
             {"rhs", r.rhs},
             {"index", r.index},
             {"q_sign", r.q_sign}};
}
inline void from_json(const json& j, EquationRow& r) {
    j.at("target_index").get_to(r.target_index);
    j.at("prime").get_to(r.prime);
    j.at("coefficients").get_to(r.coefficients);
    j.at("q_value").get_to(r.q_value);
    j.at("m_value").get_to(r.m_value);
    j.at("rhs").get_to(r.rhs);
    j.at("index").get_to(r.index);
    j.at("q_sign").get_to(r.q_sign);
}

inline void to_json(json& j, const ClosingRow& r) {
    j = json{{"coefficients", r.coefficients}, {"rhs", r.rhs}};
}
inline void from_json(const json& j, ClosingRow& r) {
    j.at("coefficients").get_to(r.coefficients);
    j.at("rhs").get_to(r.rhs);
}

inline void to_json(json& j, const EquationSystem& s) {
    j = json{{"target", s.target},
             {"base", s.base},
             {"variant", s.variant},
             {"rows", s.rows},
             {"closing", s.closing},
             {"anchor_prime", s.anchor_prime},
             {"witnesses", s.witnesses},
             {"unformed", s.unformed},
             {"period", s.period},
             {"partition_period", s.partition_period},
             {"index_sum", s.index_sum},
             {"sum_congruence_holds", s.sum_congruence_holds},
             {"sum_m_x", s.sum_m_x},
             {"rank", s.rank},
             {"dependency", s.dependency}};
}
inline void from_json(const json& j, EquationSystem& s) {
    j.at("target").get_to(s.target);
    j.at("base").get_to(s.base);
    j.at("variant").get_to(s.variant);
    j.at("rows").get_to(s.rows);
    j.at("closing").get_to(s.closing);
    j.at("anchor_prime").get_to(s.anchor_prime);
    j.at("witnesses").get_to(s.witnesses);
    j.at("unformed").get_to(s.unformed);
    j.at("period").get_to(s.period);
    j.at("partition_period").get_to(s.partition_period);
    j.at("index_sum").get_to(s.index_sum);
    j.at("sum_congruence_holds").get_to(s.sum_congruence_holds);
    j.at("sum_m_x").get_to(s.sum_m_x);
    j.at("rank").get_to(s.rank);
    j.at("dependency").get_to(s.dependency);
}

inline void to_json(json& j, const ProbeSummary& p) {
    j = json{{"period", p.period},
             {"missing_count", p.missing_count},
             {"sum_congruence_holds", p.sum_congruence_holds}};
}
inline void from_json(const json& j, ProbeSummary& p) {
    j.at("period").get_to(p.period);
    j.at("missing_count").get_to(p.missing_count);
    j.at("sum_congruence_holds").get_to(p.sum_congruence_holds);
}

inline void to_json(json& j, const AuditRecord& r) {
    j = json{{"n2", r.n2},
             {"s", r.s},
             {"product_count", r.product_count},
             {"has_sieve_witness", r.has_sieve_witness},
             {"smallest_witness", r.smallest_witness},
             {"coverage_base_found", r.coverage_base_found},
             {"collision_witness_count", r.collision_witness_count},
             {"composite_probe_summary", r.composite_probe_summary},
             {"paper_criterion_mismatch", r.paper_criterion_mismatch}};
}
inline void from_json(const json& j, AuditRecord& r) {
    j.at("n2").get_to(r.n2);
    j.at("s").get_to(r.s);
    j.at("product_count").get_to(r.product_count);
    j.at("has_sieve_witness").get_to(r.has_sieve_witness);
    j.at("smallest_witness").get_to(r.smallest_witness);
    j.at("coverage_base_found").get_to(r.coverage_base_found);
    j.at("collision_witness_count").get_to(r.collision_witness_count);
    j.at("composite_probe_summary").get_to(r.composite_probe_summary);
    j.at("paper_criterion_mismatch").get_to(r.paper_criterion_mismatch);
}

inline void to_json(json& j, const AuditSummary& s) {
    j = json{{"lo", s.lo},
             {"hi", s.hi},
             {"evens", s.evens},
             {"sieve_witness_count", s.sieve_witness_count},
             {"coverage_found_count", s.coverage_found_count},
             {"coverage_absent", s.coverage_absent},
             {"criterion_mismatch_count", s.criterion_mismatch_count},
             {"pigeonhole_count", s.pigeonhole_count},
             {"collision_witness_total", s.collision_witness_total},
             {"full", s.full}};
}
inline void from_json(const json& j, AuditSummary& s) {
    j.at("lo").get_to(s.lo);
    j.at("hi").get_to(s.hi);
    j.at("evens").get_to(s.evens);
    j.at("sieve_witness_count").get_to(s.sieve_witness_count);
    j.at("coverage_found_count").get_to(s.coverage_found_count);
    j.at("coverage_absent").get_to(s.coverage_absent);
    j.at("criterion_mismatch_count").get_to(s.criterion_mismatch_count);
    j.at("pigeonhole_count").get_to(s.pigeonhole_count);
    j.at("collision_witness_total").get_to(s.collision_witness_total);
    j.at("full").get_to(s.full);
}

// ------------------------------------------------------------ csv utils

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline void csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(cells[i]);
    }
    os << '\n';
}

// --------------------------------------------------------- text helpers

// "p = P^J - (M-1)*2N" or "p = M*2N - P^J", the exact reconstruction of
// an indexed value. Skipped for indexes too large to print sensibly.
inline std::string reconstruction(u64 n2, u64 base, u64 value, u64 index,
                                  IndexForm form) {
    if (index > kDefaultMaxJ) return "";
    bigint pj = boost::multiprecision::pow(bigint(base),
                                           static_cast<unsigned>(index));
    bigint m_minus_1 = pj / n2;
    std::ostringstream out;
    out << value << " = ";
    if (form == IndexForm::Residue)
        out << base << "^" << index << " - " << m_minus_1 << "*" << n2;
    else
        out << (m_minus_1 + 1) << "*" << n2 << " - " << base << "^" << index;
    return out.str();
}

inline std::string witness_text(const GoldbachWitness& w) {
    std::ostringstream out;
    out << w.p << "+" << w.q << "(" << to_string(w.source) << ")";
    return out.str();
}

// --------------------------------------------------------- census views

inline void write_census_text(std::ostream& os, const Census& c) {
    const EvenTarget& t = c.target;
    os << "2N = " << t.n2 << "  N = " << t.half << "  phi = " << t.totient
       << "  F = " << t.partition_count << "\n";
    os << "eff-primes (" << c.s << "):";
    for (u64 p : c.eff_primes) os << " " << p;
    os << "\n";
    os << "eff-products (" << c.eff_products.size() << "):";
    for (u64 p : c.eff_products) os << " " << p;
    os << "\n";
    os << "boundary " << t.n2 - 1 << ": "
       << (c.boundary_is_prime ? "prime" : "composite")
       << " (classified boundary, not eff-prime)\n";
}

inline void write_census_csv(std::ostream& os, const Census& c) {
    csv_row(os, {"value", "class"});
    for (u64 r = 1; r < c.target.n2; r += 2)
        csv_row(os, {std::to_string(r),
                     to_string(classify_residue(c.target, r))});
}

// ---------------------------------------------------------- orbit views

inline void write_orbit_header_text(std::ostream& os, const EvenTarget& t,
                                    u64 base, u64 period,
                                    u64 partition_period_len, bool covers) {
    os << "orbit of " << base << " mod " << t.n2 << ": period f = " << period
       << ", partition period = " << partition_period_len << ", covers "
       << (covers ? "all " : "only some of ") << t.partition_count
       << " eff-partitions\n";
}

inline void write_orbit_row_text(std::ostream& os, const EvenTarget& t,
                                 const PowerStep& s) {
    os << "j=" << s.exponent << "  M=" << s.multiplier << "  " << t.n2
       << " = (" << s.multiplier << "*" << t.n2 << " - " << s.base << "^"
       << s.exponent << ") + (" << s.base << "^" << s.exponent << " - "
       << (s.multiplier - 1) << "*" << t.n2 << ") = " << s.low_addend
       << " + " << s.high_addend << "\n";
}

inline void write_orbit_csv(std::ostream& os,
                            const std::vector<PowerStep>& steps) {
    csv_row(os, {"j", "residue", "multiplier", "low_addend", "high_addend"});
    for (const PowerStep& s : steps)
        csv_row(os, {std::to_string(s.exponent), std::to_string(s.residue),
                     s.multiplier.str(), std::to_string(s.low_addend),
                     std::to_string(s.high_addend)});
}

// --------------------------------------------------------- index views

// Table rows in value order: 1 first, census eff-primes, 2N-1 last.
// The two unit rows are informational (J = 0 by convention); they are
// not IndexTable entries.
inline void write_indexes_text(std::ostream& os, const IndexTable& table,
                               const std::vector<GoldbachWitness>& collisions) {
    const EvenTarget& t = table.target;
    os << "index table for " << t.n2 << " base " << table.base
       << ": period f = " << table.period << ", partition period = "
       << table.partition_period << ", " << table.entries.size()
       << " indexed, " << table.missing.size() << " missing\n";
    os << "J(" << table.base << ", 1) = 0  [residue]  "
       << reconstruction(t.n2, table.base, 1, 0, IndexForm::Residue)
       << "  (informational)\n";
    auto missing_it = table.missing.begin();
    auto entry_it = table.entries.begin();
    while (entry_it != table.entries.end() ||
           missing_it != table.missing.end()) {
        bool take_entry =
            entry_it != table.entries.end() &&
            (missing_it == table.missing.end() ||
             entry_it->first < *missing_it);
        if (take_entry) {
            const IndexEntry& e = entry_it->second;
            os << "J(" << table.base << ", " << e.prime << ") = " << e.index
               << "  [" << to_string(e.form) << "]  "
               << reconstruction(t.n2, table.base, e.prime, e.index, e.form)
               << "\n";
            ++entry_it;
        } else {
            os << "J(" << table.base << ", " << *missing_it
               << ") = none  (neither " << *missing_it << " nor "
               << t.n2 - *missing_it << " lies in the orbit)\n";
            ++missing_it;
        }
    }
    os << "J(" << table.base << ", " << t.n2 - 1 << ") = 0  [complement]  "
       << reconstruction(t.n2, table.base, t.n2 - 1, 0, IndexForm::Complement)
       << "  (informational)\n";
    os << "collisions (" << collisions.size() << "):\n";
    for (const GoldbachWitness& w : collisions)
        os << "  J = " << table.entries.at(w.p).index << ": " << t.n2
           << " = " << w.p << " + " << w.q << "\n";
}

inline void write_indexes_csv(std::ostream& os, const IndexTable& table) {
    csv_row(os, {"prime", "index", "form", "status"});
    csv_row(os, {"1", "0", "residue", "informational"});
    auto missing_it = table.missing.begin();
    auto entry_it = table.entries.begin();
    while (entry_it != table.entries.end() ||
           missing_it != table.missing.end()) {
        bool take_entry =
            entry_it != table.entries.end() &&
            (missing_it == table.missing.end() ||
             entry_it->first < *missing_it);
        if (take_entry) {
            const IndexEntry& e = entry_it->second;
            csv_row(os, {std::to_string(e.prime), std::to_string(e.index),
                         to_string(e.form), "indexed"});
            ++entry_it;
        } else {
            csv_row(os, {std::to_string(*missing_it), "", "", "missing"});
            ++missing_it;
        }
    }
    csv_row(os, {std::to_string(table.target.n2 - 1), "0", "complement",
                 "informational"});
}

// --------------------------------------------------------- system views

inline void write_system_text(std::ostream& os, const EquationSystem& s) {
    os << "equation system for " << s.target.n2 << " base " << s.base << " ("
       << to_string(s.variant) << "): " << s.target.n2 / 2 << " odd residues, "
       << s.closing.coefficients.size() << " unknowns, period f = "
       << s.period << ", partition period = " << s.partition_period << "\n";
    for (const EquationRow& r : s.rows) {
        os << "row p=" << r.prime << ": Q=" << r.q_value << " = "
           << r.m_value << "*" << s.partition_period << " + " << r.index
           << ", m=" << r.m_value << ", J=" << r.index << ", rhs="
           << r.rhs << "  [R=" << s.target.n2 - r.prime << ", sign="
           << (r.q_sign == IndexForm::Residue ? "+" : "-") << "]\n";
    }
    if (s.variant == SystemVariant::Anchored) {
        os << "closing (anchor): J_" << *s.anchor_prime << " = 1\n";
    } else {
        os << "closing (sum): sum of all J = " << s.closing.rhs << "\n";
        if (s.index_sum)
            os << "sum congruence to 1 mod f=" << s.period << ": "
               << (s.sum_congruence_holds ? "holds" : "fails")
               << (s.sum_m_x ? " (m_x = " + std::to_string(*s.sum_m_x) + ")"
                             : "")
               << "\n";
        else
            os << "sum congruence: unavailable (missing indexes)\n";
    }
    os << "goldbach complements (" << s.witnesses.size() << "):";
    for (const GoldbachWitness& w : s.witnesses)
        os << "  " << s.target.n2 << " = " << w.p << " + " << w.q;
    os << "\n";
    os << "unformed rows (" << s.unformed.size() << "):";
    for (u64 p : s.unformed) os << " " << p;
    os << "\n";
    os << "rank = " << s.rank << " of " << s.rows.size() + 1 << " rows ("
       << s.closing.coefficients.size() << " unknowns)\n";
    if (s.dependency) {
        os << "dependency:";
        for (const rational& w : *s.dependency) os << " " << w;
        os << "\n";
    } else {
        os << "dependency: none (rows are linearly independent)\n";
    }
}

inline void write_system_csv(std::ostream& os, const EquationSystem& s) {
    csv_row(os, {"kind", "prime", "target_index", "q_value", "m_value",
                 "index", "rhs", "detail"});
    for (const EquationRow& r : s.rows) {
        std::ostringstream coeffs;
        for (size_t i = 0; i < r.coefficients.size(); ++i) {
            if (i) coeffs << ' ';
            coeffs << r.coefficients[i];
        }
        csv_row(os, {"row", std::to_string(r.prime),
                     std::to_string(r.target_index),
                     std::to_string(r.q_value), std::to_string(r.m_value),
                     std::to_string(r.index), std::to_string(r.rhs),
                     coeffs.str()});
    }
    {
        std::ostringstream coeffs;
        for (size_t i = 0; i < s.closing.coefficients.size(); ++i) {
            if (i) coeffs << ' ';
            coeffs << s.closing.coefficients[i];
        }
        csv_row(os, {"closing", "", "", "", "", "",
                     std::to_string(s.closing.rhs), coeffs.str()});
    }
    for (const GoldbachWitness& w : s.witnesses)
        csv_row(os, {"witness", std::to_string(w.p), "", "", "", "", "",
                     std::to_string(s.target.n2) + "=" + std::to_string(w.p) +
                         "+" + std::to_string(w.q)});
    for (u64 p : s.unformed)
        csv_row(os, {"unformed", std::to_string(p), "", "", "", "", "", ""});
    csv_row(os, {"rank", "", "", "", "", "", std::to_string(s.rank),
                 std::to_string(s.rows.size() + 1) + " rows, " +
                     std::to_string(s.closing.coefficients.size()) +
                     " unknowns"});
    if (s.dependency) {
        std::ostringstream weights;
        for (size_t i = 0; i < s.dependency->size(); ++i) {
            if (i) weights << ' ';
            weights << (*s.dependency)[i];
        }
        csv_row(os, {"dependency", "", "", "", "", "", "", weights.str()});
    } else {
        csv_row(os, {"dependency", "", "", "", "", "", "", "none"});
    }
}

// ---------------------------------------------------------- probe views

inline void write_probe_text(std::ostream& os, const CompositeBaseProbe& p) {
    os << "composite-base probe for " << p.target.n2 << ": P = product of "
       << p.factor_multiset.size() << " eff-primes, base residue = "
       << p.base_residue << "\n";
    if (p.degenerate) {
        os << "degenerate: the product reduces to 1 mod " << p.target.n2
           << "; period 1, nothing to index\n";
        return;
    }
    os << "period f = " << p.period << ", partition period = "
       << p.per_prime.partition_period << "\n";
    os << "indexed " << p.per_prime.entries.size() << " of "
       << p.factor_multiset.size() << " eff-primes, "
       << p.per_prime.missing.size() << " missing\n";
    for (const auto& [prime, e] : p.per_prime.entries)
        os << "J(" << p.base_residue << ", " << prime << ") = " << e.index
           << "  [" << to_string(e.form) << "]\n";
    if (p.index_sum) {
        os << "sum of indexes = " << *p.index_sum << "; congruence to 1 mod "
           << p.period << ": "
           << (p.sum_congruence_holds ? "holds" : "fails");
        if (p.probe_m_x) os << " (m_x = " << *p.probe_m_x << ")";
        os << "\n";
    } else {
        os << "sum of indexes: unavailable (missing indexes)\n";
    }
}

inline void write_probe_csv(std::ostream& os, const CompositeBaseProbe& p) {
    csv_row(os, {"prime", "index", "form", "status"});
    auto missing_it = p.per_prime.missing.begin();
    auto entry_it = p.per_prime.entries.begin();
    while (entry_it != p.per_prime.entries.end() ||
           missing_it != p.per_prime.missing.end()) {
        bool take_entry =
            entry_it != p.per_prime.entries.end() &&
            (missing_it == p.per_prime.missing.end() ||
             entry_it->first < *missing_it);
        if (take_entry) {
            const IndexEntry& e = entry_it->second;
            csv_row(os, {std::to_string(e.prime), std::to_string(e.index),
                         to_string(e.form), "indexed"});
            ++entry_it;
        } else {
            csv_row(os, {std::to_string(*missing_it), "", "", "missing"});
            ++missing_it;
        }
    }
}

// ----------------------------------------------------------- scan views

inline void write_record_text(std::ostream& os, const AuditRecord& r,
                              bool full) {
    os << "2N=" << r.n2 << " s=" << r.s << " products=" << r.product_count
       << " witness="
       << (r.smallest_witness ? witness_text(*r.smallest_witness) : "NONE");
    if (full) {
        os << " coverage=";
        if (r.coverage_base_found)
            os << *r.coverage_base_found;
        else
            os << "absent";
        os << " collisions=" << r.collision_witness_count;
        if (r.composite_probe_summary)
            os << " probe=(f=" << r.composite_probe_summary->period
               << ",missing=" << r.composite_probe_summary->missing_count
               << ",sum1=" << (r.composite_probe_summary->sum_congruence_holds
                                   ? "yes"
                                   : "no")
               << ")";
        os << " mismatch=" << (r.paper_criterion_mismatch ? "yes" : "no");
    }
    os << "\n";
}

inline void write_record_csv_header(std::ostream& os) {
    csv_row(os, {"n2", "s", "product_count", "has_sieve_witness",
                 "witness_p", "witness_q", "witness_source",
                 "coverage_base_found", "collision_witness_count",
                 "probe_period", "probe_missing_count",
                 "probe_sum_congruence_holds", "paper_criterion_mismatch"});
}

inline void write_record_csv(std::ostream& os, const AuditRecord& r) {
    std::vector<std::string> cells;
    cells.push_back(std::to_string(r.n2));
    cells.push_back(std::to_string(r.s));
    cells.push_back(std::to_string(r.product_count));
    cells.push_back(r.has_sieve_witness ? "true" : "false");
    if (r.smallest_witness) {
        cells.push_back(std::to_string(r.smallest_witness->p));
        cells.push_back(std::to_string(r.smallest_witness->q));
        cells.push_back(to_string(r.smallest_witness->source));
    } else {
        cells.insert(cells.end(), {"", "", ""});
    }
    cells.push_back(r.coverage_base_found
                        ? std::to_string(*r.coverage_base_found)
                        : "");
    cells.push_back(std::to_string(r.collision_witness_count));
    if (r.composite_probe_summary) {
        cells.push_back(std::to_string(r.composite_probe_summary->period));
        cells.push_back(
            std::to_string(r.composite_probe_summary->missing_count));
        cells.push_back(r.composite_probe_summary->sum_congruence_holds
                            ? "true"
                            : "false");
    } else {
        cells.insert(cells.end(), {"", "", ""});
    }
    cells.push_back(r.paper_criterion_mismatch ? "true" : "false");
    csv_row(os, cells);
}

inline void write_summary_text(std::ostream& os, const AuditSummary& s) {
    os << "audited " << s.evens << " even numbers in [" << s.lo << ", "
       << s.hi << "] (" << (s.full ? "full" : "sieve-only") << ")\n";
    os << "sieve witnesses: " << s.sieve_witness_count << "/" << s.evens;
    if (s.evens)
        os << " (" << std::fixed << std::setprecision(1)
           << 100.0 * static_cast<double>(s.sieve_witness_count) /
                  static_cast<double>(s.evens)
           << "%)";
    os << "\n";
    if (s.full) {
        os << "coverage base found: " << s.coverage_found_count
           << "; absent for " << s.coverage_absent.size() << ":";
        for (u64 n2 : s.coverage_absent) os << " " << n2;
        os << "\n";
        os << "coverage-criterion mismatches (covers xor f=F): "
           << s.criterion_mismatch_count << "\n";
        os << "collision witnesses: " << s.collision_witness_total
           << " (all sieve-confirmed)\n";
    }
    os << "pigeonhole cases (s > products): " << s.pigeonhole_count << "\n";
}

// ------------------------------------------------------------- cache

// Append-only NDJSON cache of audit records, keyed by (n2, version,
// mode). Stale versions are skipped on load and never migrated.
// Thread-safe: scan workers probe it while the emitter appends.
class AuditCache {
  public:
    explicit AuditCache(const std::string& path,
                        std::string version = kVersion)
        : path_(path), version_(std::move(version)) {
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) continue; // torn tail write; ignore
            if (j.value("version", "") != version_) continue;
            bool full = j.value("mode", "") == "full";
            AuditRecord rec = j.at("record").get<AuditRecord>();
            records_[{rec.n2, full}] = std::move(rec);
        }
    }

    std::optional<AuditRecord> lookup(u64 n2, bool full) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = records_.find({n2, full});
        if (it == records_.end()) return std::nullopt;
        return it->second;
    }

    void store(const AuditRecord& rec, bool full) {
        std::lock_guard<std::mutex> lock(mu_);
        records_[{rec.n2, full}] = rec;
        std::ofstream out(path_, std::ios::app);
        json line{{"version", version_},
                  {"mode", full ? "full" : "sieve"},
                  {"record", rec}};
        out << line.dump() << "\n";
    }

  private:
    std::string path_;
    std::string version_;
    mutable std::mutex mu_;
    std::map<std::pair<u64, bool>, AuditRecord> records_;
};

}  // namespace effnum
