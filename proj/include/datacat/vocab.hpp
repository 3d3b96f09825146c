#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "datacat/graphstore.hpp"

namespace datacat::vocab {

inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kDbpedia = "http://dbpedia.org/resource/";

/// The catalog's own vocabulary, rooted at "<origin>/vocab#".
class Vocabulary {
public:
    explicit Vocabulary(std::string_view server_origin);

    const std::string& ns() const noexcept { return ns_; }
    graph::Term term(std::string_view local) const { return graph::Term::iri(ns_ + std::string(local)); }

    // Classes
    graph::Term column() const { return term("Column"); }
    graph::Term other_values() const { return term("OtherValues"); }

    // Properties
    graph::Term column_of() const { return term("columnOf"); }
    graph::Term column_index() const { return term("columnIndex"); }
    graph::Term total_count() const { return term("totalCount"); }
    graph::Term distinct_count() const { return term("distinctCount"); }
    graph::Term blank_count() const { return term("blankCount"); }
    graph::Term empty_count() const { return term("emptyCount"); }
    graph::Term min_length() const { return term("minLength"); }
    graph::Term avg_length() const { return term("avgLength"); }
    graph::Term std_dev_length() const { return term("stdDevLength"); }
    graph::Term max_length() const { return term("maxLength"); }
    graph::Term histogram_entry() const { return term("histogramEntry"); }
    graph::Term value() const { return term("value"); }
    graph::Term frequency() const { return term("frequency"); }

    /// du:, rdf:, rdfs:, xsd:, dbpedia:
    graph::PrefixMap prefixes() const;

private:
    std::string ns_;
};

struct VocabularyEntry {
    std::string_view local;
    std::string_view kind;  // "class" or "property"
    std::string_view comment;
};

/// Documented terms, in presentation order.
const std::vector<VocabularyEntry>& vocabulary_entries();

/// Self-contained HTML reference page for the du: vocabulary.
std::string render_vocabulary_page(const Vocabulary& vocabulary);

inline graph::Term rdf_type() { return graph::Term::iri(std::string(kRdf) + "type"); }
inline graph::Term rdfs_label() { return graph::Term::iri(std::string(kRdfs) + "label"); }
inline graph::Term rdfs_comment() { return graph::Term::iri(std::string(kRdfs) + "comment"); }
inline graph::Term rdfs_see_also() { return graph::Term::iri(std::string(kRdfs) + "seeAlso"); }

}  // namespace datacat::vocab
