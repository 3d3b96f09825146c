#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "datacat/term.hpp"

namespace datacat::graph {

using TermId = std::uint32_t;
using IdTriple = std::array<TermId, 3>;  // subject, predicate, object

struct Variable {
    std::string name;
    friend bool operator==(const Variable&, const Variable&) = default;
};

using PatternTerm = std::variant<Term, Variable>;

struct TriplePattern {
    PatternTerm subject;
    PatternTerm predicate;
    PatternTerm object;
};

/// In-memory RDF graph with set semantics. Terms are interned; triples are
/// kept in SPO, POS and OSP orderings so any combination of ground
/// positions is a range lookup.
///
/// The store itself is not synchronized. Callers that share one instance
/// between threads hold a reader/writer lock around it.
class GraphStore {
public:
    /// Throws Error(MalformedTriple). Returns false when already present.
    bool insert(const Triple& triple);
    bool remove(const Triple& triple);
    bool contains(const Triple& triple) const;

    std::size_t size() const noexcept { return spo_.size(); }
    bool empty() const noexcept { return spo_.empty(); }
    void clear();

    /// Every triple unifying with `pattern`, each once. A variable repeated
    /// within the pattern must bind the same term.
    std::vector<Triple> match(const TriplePattern& pattern) const;

    std::vector<Triple> triples() const;

    /// Set equality, independent of interning order.
    bool same_triples(const GraphStore& other) const;

    // Id-level access used by the query engine.
    std::optional<TermId> lookup(const Term& term) const;
    const Term& term(TermId id) const { return terms_[id]; }

    /// Calls `visit` for every stored triple matching the ground positions.
    void scan(std::optional<TermId> s, std::optional<TermId> p, std::optional<TermId> o,
              const std::function<void(const IdTriple&)>& visit) const;

private:
    TermId intern(const Term& term);
    std::optional<IdTriple> lookup(const Triple& triple) const;
    Triple materialize(const IdTriple& ids) const;

    std::vector<Term> terms_;
    std::unordered_map<Term, TermId> ids_;
    std::set<IdTriple> spo_;
    std::set<IdTriple> pos_;
    std::set<IdTriple> osp_;
};

std::vector<Triple> match_pattern(const GraphStore& store, const TriplePattern& pattern);

// ---------------------------------------------------------------------------
// N-Triples persistence

/// One "S P O ." line per triple, sorted by serialized subject, predicate,
/// object. Empty store -> empty string.
std::string export_ntriples(const GraphStore& store);

/// Adds every triple in `text`; blank lines and '#' comments are skipped.
/// Returns the number of triples newly added. Throws ParseError with the
/// 1-based line number. The store is unchanged when parsing fails.
std::size_t import_ntriples(GraphStore& store, std::string_view text);

// ---------------------------------------------------------------------------
// Basic graph pattern queries

using PrefixMap = std::map<std::string, std::string, std::less<>>;

struct BgpQuery {
    std::vector<std::string> selected;  // without '?'
    std::vector<TriplePattern> patterns;
};

using BindingSet = std::map<std::string, Term, std::less<>>;

struct QueryResult {
    std::vector<std::string> variables;
    std::vector<BindingSet> rows;
};

/// Parses "[PREFIX p: <iri>]* SELECT (?v+ | *) [WHERE] { pattern (. pattern)* [.] }".
/// Supports prefixed names, 'a', numeric and quoted literals. Blank node
/// labels in patterns act as non-selectable variables. Throws
/// Error(ParseError) with line and column.
BgpQuery parse_query(std::string_view text, const PrefixMap& prefixes = {});

/// Natural join of the pattern matches projected onto the selected
/// variables, duplicates removed, rows ordered by the N-Triples text of the
/// bound terms (selected-variable order major). Throws
/// Error(UnboundSelectedVariable) when a selected variable occurs in no
/// pattern or the pattern list is empty.
QueryResult query_bgp(const GraphStore& store, const BgpQuery& query);

}  // namespace datacat::graph
