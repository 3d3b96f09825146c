#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "datacat/graphstore.hpp"
#include "datacat/resources.hpp"
#include "datacat/vocab.hpp"

namespace datacat::report {

// Template syntax
//
//   {{query: <BGP> [ORDER BY key+] [LIMIT n] | <body> [{{else}} <empty>]}}
//
// renders <body> once per solution of the query, or <empty> when there is
// none. Inside the query text {name} is replaced by the N-Triples form of an
// enclosing binding; inside bodies {name} or {name:filter} is replaced by its
// HTML-escaped display text. Filters:
//
//   nt        N-Triples form
//   fragment  text after '#' of an IRI
//   short     local name of an IRI (after '#' or the last '/'), literal text otherwise
//   bar       block-character bar, proportional to the largest value of that
//             variable in the current result set (20 blocks wide)
//
// ORDER BY keys are ?v, ASC(?v) or DESC(?v); numeric literals compare by value.

struct TextNode;
struct VarNode;
struct QueryNode;
using Node = std::variant<TextNode, VarNode, QueryNode>;
using Nodes = std::vector<Node>;

struct TextNode {
    std::string text;
};

struct VarNode {
    std::string name;
    std::string filter;
};

struct QueryNode {
    std::string query;  // raw text between "query:" and '|'
    Nodes body;
    bool has_else = false;
    Nodes empty;
};

class ReportTemplate {
public:
    /// Throws Error(TemplateSyntaxError) on unbalanced or malformed placeholders.
    static ReportTemplate parse(std::string name, std::string text);

    const std::string& name() const noexcept { return name_; }
    const std::string& text() const noexcept { return text_; }
    const Nodes& nodes() const noexcept { return nodes_; }

private:
    std::string name_;
    std::string text_;
    Nodes nodes_;
};

/// Reconstructs template text from parsed nodes (inverse of parsing).
std::string serialize(const Nodes& nodes);

/// Built-in report: resource summary, per-column statistics, and a top-10
/// histogram per column. Context variables: table, name, rows, cols.
ReportTemplate default_template();

/// Renders `tmpl` for `table`. Every placeholder is checked against the
/// variables in scope before anything is evaluated. Throws
/// Error(TemplateSyntaxError) or Error(QueryError).
std::string render_report(const graph::GraphStore& store, const resources::TableResource& table,
                          const ReportTemplate& tmpl, const vocab::Vocabulary& vocabulary);

}  // namespace datacat::report
