#pragma once

#include "xwf/model.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace xwf {

enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(Cmp c);
Cmp cmp_from_string(std::string_view s);
/// De Morgan complement: NOT (x > v) is (x <= v), and so on.
Cmp negate(Cmp c);

/// Canonicalized atomic selection predicate over one dimension attribute.
/// Two syntactically different occurrences with the same meaning (for a
/// numeric attribute, literals "15" and "15.0") map to one predicate.
struct SelectionPredicate {
    std::string id; // p1, p2, ... in first-occurrence order
    std::string dimension_id;
    std::string attribute_id;
    Cmp cmp = Cmp::Eq;
    Value literal;

    /// Identity key, without the id.
    std::string canonical_key() const;
    /// True when `v` satisfies the comparison against the literal.
    bool matches(const Value& v) const;

    bool operator==(const SelectionPredicate&) const = default;
};

struct WorkloadQuery {
    std::string id; // q1, q2, ... in document order
    std::vector<std::string> selections; // predicate ids, query order, deduplicated
    std::set<std::string> joined_dimensions;
    std::string source_text;
    int frequency = 1;
};

/// Parsed workload: queries plus the global deduplicated predicate set.
struct Workload {
    std::vector<WorkloadQuery> queries;
    std::vector<SelectionPredicate> predicates;

    const SelectionPredicate* find_predicate(std::string_view id) const;
    int predicate_pos(std::string_view id) const;
    std::map<std::string, int> frequencies() const;
};

struct WorkloadParseError : Error {
    using Error::Error;
};

/**
 * Parses the restricted XQuery-style workload grammar (query blocks
 * separated by blank lines). Predicates are canonicalized and deduplicated
 * across the whole workload, ids assigned in first-occurrence order.
 * Throws WorkloadParseError with the query index on grammar violations and
 * on unknown dimensions or attributes.
 */
Workload parse_workload(const std::string& text, const WarehouseMeta& meta);

/// Renders a workload back into the grammar accepted by parse_workload.
std::string to_text(const Workload& workload);

/// Binary queries-by-predicates incidence matrix.
struct QueryPredicateMatrix {
    std::vector<std::string> queries;
    std::vector<std::string> predicates;
    std::vector<std::vector<std::uint8_t>> cells; // row per query

    /// Column as a query-membership vector.
    std::vector<std::uint8_t> column(int pred_pos) const;
    double density() const;
};

QueryPredicateMatrix build_qp_matrix(const Workload& workload);

} // namespace xwf
