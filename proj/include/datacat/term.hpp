#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace datacat::graph {

inline constexpr std::string_view kXsdString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kXsdDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view kRdfLangString = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

enum class TermKind : std::uint8_t { Iri, BlankNode, Literal };

/// RDF term. Literals always carry a datatype; language-tagged literals use
/// rdf:langString.
class Term {
public:
    static Term iri(std::string value);
    static Term blank(std::string label);
    static Term literal(std::string lexical, std::string datatype = std::string(kXsdString));
    static Term lang_literal(std::string lexical, std::string language);
    static Term integer(long long value);

    TermKind kind() const noexcept { return kind_; }
    bool is_iri() const noexcept { return kind_ == TermKind::Iri; }
    bool is_blank() const noexcept { return kind_ == TermKind::BlankNode; }
    bool is_literal() const noexcept { return kind_ == TermKind::Literal; }

    /// IRI text, blank node label, or literal lexical form.
    const std::string& value() const noexcept { return value_; }
    const std::string& datatype() const noexcept { return datatype_; }
    const std::string& language() const noexcept { return language_; }

    /// Canonical N-Triples form.
    std::string to_ntriples() const;

    friend bool operator==(const Term&, const Term&) = default;
    friend std::strong_ordering operator<=>(const Term&, const Term&) = default;

private:
    Term(TermKind kind, std::string value, std::string datatype, std::string language)
        : kind_(kind), value_(std::move(value)), datatype_(std::move(datatype)), language_(std::move(language)) {}

    TermKind kind_;
    std::string value_;
    std::string datatype_;
    std::string language_;
};

struct Triple {
    Term subject;
    Term predicate;
    Term object;

    std::string to_ntriples() const;  // "S P O ." without newline

    friend bool operator==(const Triple&, const Triple&) = default;
    friend std::strong_ordering operator<=>(const Triple&, const Triple&) = default;
};

/// True when `iri` starts with a URI scheme followed by ':'.
bool is_absolute_iri(std::string_view iri) noexcept;

/// Throws Error(MalformedTriple) unless the triple has an IRI or blank
/// subject, an IRI predicate, absolute IRIs, and a consistent literal.
void validate(const Triple& triple);

/// Parses exactly one N-Triples term, surrounding whitespace allowed.
/// Throws Error(ParseError).
Term parse_term(std::string_view text);

/// Parses "S P O ." (one N-Triples statement). Throws Error(ParseError).
Triple parse_triple(std::string_view text);

namespace syntax {

/// Thrown by the low-level readers; callers attach line information.
struct Failure {
    std::size_t offset;
    std::string message;
};

void skip_space(std::string_view s, std::size_t& pos) noexcept;
std::string read_iriref(std::string_view s, std::size_t& pos);
std::string read_quoted(std::string_view s, std::size_t& pos);
std::string read_langtag(std::string_view s, std::size_t& pos);
std::string read_blank_label(std::string_view s, std::size_t& pos);

/// IRI, blank node, or literal in N-Triples syntax starting at `pos`.
Term read_term(std::string_view s, std::size_t& pos);

std::string escape_iri(std::string_view iri);
std::string escape_string(std::string_view text);

}  // namespace syntax

}  // namespace datacat::graph

template <>
struct std::hash<datacat::graph::Term> {
    std::size_t operator()(const datacat::graph::Term& t) const noexcept {
        std::size_t h = std::hash<std::string>{}(t.value());
        h ^= std::hash<std::string>{}(t.datatype()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<std::string>{}(t.language()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h ^ static_cast<std::size_t>(t.kind());
    }
};
