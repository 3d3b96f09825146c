#include "datacat/vocab.hpp"

#include <sstream>

#include "datacat/html.hpp"

namespace datacat::vocab {

Vocabulary::Vocabulary(std::string_view server_origin) : ns_(server_origin) {
    while (!ns_.empty() && ns_.back() == '/') {
        ns_.pop_back();
    }
    ns_ += "/vocab#";
}

graph::PrefixMap Vocabulary::prefixes() const {
    return graph::PrefixMap{
        {"du", ns_},
        {"rdf", std::string(kRdf)},
        {"rdfs", std::string(kRdfs)},
        {"xsd", std::string(kXsd)},
        {"dbpedia", std::string(kDbpedia)},
    };
}

const std::vector<VocabularyEntry>& vocabulary_entries() {
    static const std::vector<VocabularyEntry> entries{
        {"Column", "class", "A table column addressed by a col= deep link."},
        {"OtherValues", "class", "Marker used as du:value of the histogram entry that folds values beyond the cap."},
        {"columnOf", "property", "Links a column to the base IRI of its table."},
        {"columnIndex", "property", "1-based position of the column in its table (xsd:integer)."},
        {"totalCount", "property", "Number of data values in the column (xsd:integer)."},
        {"distinctCount", "property", "Number of distinct raw values, empty and blank included (xsd:integer)."},
        {"blankCount", "property", "Values of length one or more made only of whitespace (xsd:integer)."},
        {"emptyCount", "property", "Zero-length values (xsd:integer)."},
        {"minLength", "property", "Shortest value length in code points (xsd:integer)."},
        {"avgLength", "property", "Mean value length in code points (xsd:decimal, 6 fractional digits)."},
        {"stdDevLength", "property", "Population standard deviation of value lengths (xsd:decimal, 6 fractional digits)."},
        {"maxLength", "property", "Longest value length in code points (xsd:integer)."},
        {"histogramEntry", "property", "Links a column to one blank-node histogram entry."},
        {"value", "property", "The value counted by a histogram entry, or du:OtherValues for the overflow entry."},
        {"frequency", "property", "Number of occurrences counted by a histogram entry (xsd:integer)."},
    };
    return entries;
}

std::string render_vocabulary_page(const Vocabulary& vocabulary) {
    std::ostringstream out;
    out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
        << "<title>Catalog vocabulary</title>\n"
        << "<style>body{font-family:sans-serif;margin:2em}td,th{padding:4px 8px;text-align:left;"
           "border-bottom:1px solid #ddd}code{background:#f4f4f4}</style>\n"
        << "</head>\n<body>\n<h1>Catalog vocabulary</h1>\n"
        << "<p>Namespace: <code>" << html::escape(vocabulary.ns()) << "</code> (prefix <code>du:</code>)</p>\n"
        << "<table>\n<tr><th>Term</th><th>Kind</th><th>Description</th></tr>\n";
    for (const auto& entry : vocabulary_entries()) {
        const std::string local(entry.local);
        out << "<tr id=\"" << html::escape(local) << "\"><td><code>du:" << html::escape(local)
            << "</code></td><td>" << entry.kind << "</td><td>" << html::escape(entry.comment) << "</td></tr>\n";
    }
    out << "</table>\n</body>\n</html>\n";
    return out.str();
}

}  // namespace datacat::vocab
