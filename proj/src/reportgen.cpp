#include "datacat/reportgen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>

#include "datacat/error.hpp"
#include "datacat/html.hpp"

namespace datacat::report {

namespace {

[[noreturn]] void template_error(const std::string& message) {
    throw Error(ErrorCode::TemplateSyntaxError, message);
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

// Length of a "{name}" or "{name:filter}" placeholder at `pos`, or 0.
std::size_t placeholder_length(std::string_view s, std::size_t pos, VarNode* out) {
    if (pos + 2 >= s.size() || s[pos] != '{' || !ident_start(s[pos + 1])) {
        return 0;
    }
    std::size_t i = pos + 1;
    while (i < s.size() && ident_char(s[i])) {
        ++i;
    }
    const std::size_t name_end = i;
    std::size_t filter_begin = i;
    if (i < s.size() && s[i] == ':') {
        ++i;
        filter_begin = i;
        while (i < s.size() && ident_char(s[i])) {
            ++i;
        }
        if (i == filter_begin) {
            return 0;
        }
    }
    if (i >= s.size() || s[i] != '}') {
        return 0;
    }
    if (out != nullptr) {
        out->name = std::string(s.substr(pos + 1, name_end - pos - 1));
        out->filter = filter_begin < i ? std::string(s.substr(filter_begin, i - filter_begin)) : std::string();
    }
    return i - pos + 1;
}

class TemplateParser {
public:
    explicit TemplateParser(std::string_view text) : text_(text) {}

    Nodes parse() {
        Nodes nodes = sequence(0, nullptr);
        if (pos_ != text_.size()) {
            template_error("unexpected '}}' at offset " + std::to_string(pos_));
        }
        return nodes;
    }

private:
    // Parses nodes until end of input (depth 0) or a closing "}}" / "{{else}}"
    // (depth > 0). `stopped_at_else` reports which terminator was seen.
    Nodes sequence(int depth, bool* stopped_at_else) {
        Nodes nodes;
        std::string text;
        auto flush = [&] {
            if (!text.empty()) {
                nodes.emplace_back(TextNode{std::move(text)});
                text.clear();
            }
        };
        while (pos_ < text_.size()) {
            const std::string_view rest = text_.substr(pos_);
            if (rest.rfind("{{query:", 0) == 0) {
                flush();
                const std::size_t start = pos_;
                pos_ += 8;
                nodes.emplace_back(query_node(start, depth));
                continue;
            }
            if (depth > 0 && rest.rfind("{{else}}", 0) == 0) {
                flush();
                pos_ += 8;
                *stopped_at_else = true;
                return nodes;
            }
            if (depth > 0 && rest.rfind("}}", 0) == 0) {
                flush();
                pos_ += 2;
                return nodes;
            }
            if (rest.rfind("{{", 0) == 0) {
                template_error("unknown directive at offset " + std::to_string(pos_));
            }
            VarNode var;
            if (const std::size_t len = placeholder_length(text_, pos_, &var); len > 0) {
                flush();
                nodes.emplace_back(std::move(var));
                pos_ += len;
                continue;
            }
            text.push_back(text_[pos_++]);
        }
        if (depth > 0) {
            template_error("unterminated {{query: ...}} block");
        }
        flush();
        return nodes;
    }

    QueryNode query_node(std::size_t start, int depth) {
        QueryNode node;
        char quote = 0;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (quote != 0) {
                if (c == '\\') {
                    node.query.push_back(c);
                    ++pos_;
                    if (pos_ < text_.size()) {
                        node.query.push_back(text_[pos_++]);
                    }
                    continue;
                }
                if (c == quote) {
                    quote = 0;
                }
            } else if (c == '"' || c == '\'') {
                quote = c;
            } else if (c == '|') {
                break;
            } else if (text_.substr(pos_, 2) == "{{") {
                template_error("query block at offset " + std::to_string(start) + " has no '|' body separator");
            }
            node.query.push_back(c);
            ++pos_;
        }
        if (pos_ >= text_.size()) {
            template_error("unterminated {{query: ...}} block at offset " + std::to_string(start));
        }
        if (node.query.find_first_not_of(" \t\r\n") == std::string::npos) {
            template_error("query block at offset " + std::to_string(start) + " has an empty query");
        }
        ++pos_;  // '|'
        bool at_else = false;
        node.body = sequence(depth + 1, &at_else);
        if (at_else) {
            node.has_else = true;
            bool again = false;
            node.empty = sequence(depth + 1, &again);
            if (again) {
                template_error("duplicate {{else}} in query block at offset " + std::to_string(start));
            }
        }
        return node;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void serialize_into(const Nodes& nodes, std::string& out) {
    for (const auto& node : nodes) {
        if (const auto* t = std::get_if<TextNode>(&node)) {
            out += t->text;
        } else if (const auto* v = std::get_if<VarNode>(&node)) {
            out += "{" + v->name + (v->filter.empty() ? "" : ":" + v->filter) + "}";
        } else {
            const auto& q = std::get<QueryNode>(node);
            out += "{{query:" + q.query + "|";
            serialize_into(q.body, out);
            if (q.has_else) {
                out += "{{else}}";
                serialize_into(q.empty, out);
            }
            out += "}}";
        }
    }
}

// ---------------------------------------------------------------------------
// Query text handling

struct OrderKey {
    std::string variable;
    bool descending = false;
};

struct PreparedQuery {
    std::string bgp;
    std::vector<OrderKey> order;
    std::optional<std::size_t> limit;
};

using Scope = std::map<std::string, graph::Term, std::less<>>;

// Replaces {name} placeholders in query text. With `scope` null, every
// placeholder becomes a dummy IRI (used for validation).
std::string substitute(std::string_view query, const Scope* scope, const std::set<std::string>& names) {
    std::string out;
    std::size_t pos = 0;
    while (pos < query.size()) {
        VarNode var;
        const std::size_t len = placeholder_length(query, pos, &var);
        if (len == 0) {
            out.push_back(query[pos++]);
            continue;
        }
        if (!var.filter.empty()) {
            template_error("filters are not allowed inside query text: {" + var.name + ":" + var.filter + "}");
        }
        if (names.count(var.name) == 0) {
            template_error("query text refers to {" + var.name + "}, which is not in scope");
        }
        out += scope != nullptr ? scope->at(var.name).to_ntriples() : std::string("<urn:placeholder>");
        pos += len;
    }
    return out;
}

[[noreturn]] void query_error(const std::string& query, const std::string& message) {
    throw Error(ErrorCode::QueryError, "template query '" + query + "': " + message);
}

PreparedQuery prepare(const std::string& query) {
    PreparedQuery prepared;
    const auto close = query.rfind('}');
    if (close == std::string::npos) {
        query_error(query, "missing '{ ... }' pattern block");
    }
    prepared.bgp = query.substr(0, close + 1);
    std::string_view tail = std::string_view(query).substr(close + 1);

    std::vector<std::string> words;
    std::string current;
    for (const char c : tail) {
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            if (!current.empty()) {
                words.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) {
        words.push_back(std::move(current));
    }

    auto upper = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
        return s;
    };
    std::size_t i = 0;
    if (i + 1 < words.size() && upper(words[i]) == "ORDER" && upper(words[i + 1]) == "BY") {
        i += 2;
        while (i < words.size() && upper(words[i]) != "LIMIT") {
            std::string w = words[i++];
            OrderKey key;
            const std::string u = upper(w);
            if (u.rfind("DESC(", 0) == 0 || u.rfind("ASC(", 0) == 0) {
                key.descending = u[0] == 'D';
                if (w.back() != ')') {
                    query_error(query, "bad ORDER BY key '" + w + "'");
                }
                w = w.substr(key.descending ? 5 : 4, w.size() - (key.descending ? 6 : 5));
            }
            if (w.size() < 2 || (w[0] != '?' && w[0] != '$')) {
                query_error(query, "bad ORDER BY key '" + words[i - 1] + "'");
            }
            key.variable = w.substr(1);
            prepared.order.push_back(std::move(key));
        }
        if (prepared.order.empty()) {
            query_error(query, "ORDER BY needs at least one key");
        }
    }
    if (i < words.size() && upper(words[i]) == "LIMIT") {
        if (i + 1 >= words.size()) {
            query_error(query, "LIMIT needs a number");
        }
        const std::string& n = words[i + 1];
        if (n.empty() || !std::all_of(n.begin(), n.end(), [](unsigned char c) { return std::isdigit(c) != 0; })) {
            query_error(query, "bad LIMIT '" + n + "'");
        }
        prepared.limit = std::stoull(n);
        i += 2;
    }
    if (i != words.size()) {
        query_error(query, "unexpected '" + words[i] + "' after the pattern block");
    }
    return prepared;
}

std::optional<double> numeric_value(const graph::Term& t) {
    if (!t.is_literal()) {
        return std::nullopt;
    }
    const std::string& dt = t.datatype();
    if (dt != graph::kXsdInteger && dt != graph::kXsdDecimal &&
        dt != std::string(vocab::kXsd) + "double" && dt != std::string(vocab::kXsd) + "float") {
        return std::nullopt;
    }
    char* end = nullptr;
    const double v = std::strtod(t.value().c_str(), &end);
    if (end == t.value().c_str() || *end != '\0') {
        return std::nullopt;
    }
    return v;
}

int compare_terms(const graph::Term& a, const graph::Term& b) {
    const auto na = numeric_value(a);
    const auto nb = numeric_value(b);
    if (na && nb && *na != *nb) {
        return *na < *nb ? -1 : 1;
    }
    if (na && nb) {
        return 0;
    }
    const std::string sa = a.to_ntriples();
    const std::string sb = b.to_ntriples();
    return sa < sb ? -1 : (sa > sb ? 1 : 0);
}

std::string display_text(const graph::Term& t) {
    return t.is_blank() ? "_:" + t.value() : t.value();
}

std::string apply_filter(const graph::Term& t, const std::string& filter, double bar_max) {
    if (filter.empty()) {
        return html::escape(display_text(t));
    }
    if (filter == "nt") {
        return html::escape(t.to_ntriples());
    }
    if (filter == "fragment") {
        const auto hash = t.value().find('#');
        return html::escape(t.is_iri() && hash != std::string::npos ? t.value().substr(hash + 1) : display_text(t));
    }
    if (filter == "short") {
        if (!t.is_iri()) {
            return html::escape(display_text(t));
        }
        const auto cut = t.value().find_last_of("#/");
        return html::escape(cut == std::string::npos ? t.value() : t.value().substr(cut + 1));
    }
    // bar
    const auto v = numeric_value(t);
    std::size_t blocks = 0;
    if (v && *v > 0 && bar_max > 0) {
        blocks = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(20.0 * *v / bar_max)));
    }
    std::string out;
    for (std::size_t i = 0; i < blocks; ++i) {
        out += "█";
    }
    return out;
}

const std::set<std::string>& known_filters() {
    static const std::set<std::string> filters{"nt", "fragment", "short", "bar"};
    return filters;
}

class Renderer {
public:
    Renderer(const graph::GraphStore& store, graph::PrefixMap prefixes)
        : store_(store), prefixes_(std::move(prefixes)) {}

    void validate(const Nodes& nodes, const std::set<std::string>& names) const {
        for (const auto& node : nodes) {
            if (const auto* v = std::get_if<VarNode>(&node)) {
                if (names.count(v->name) == 0) {
                    template_error("placeholder {" + v->name + "} is not bound by an enclosing query");
                }
                if (!v->filter.empty() && known_filters().count(v->filter) == 0) {
                    template_error("unknown filter '" + v->filter + "' in {" + v->name + ":" + v->filter + "}");
                }
            } else if (const auto* q = std::get_if<QueryNode>(&node)) {
                const PreparedQuery prepared = prepare(substitute(q->query, nullptr, names));
                graph::BgpQuery parsed;
                try {
                    parsed = graph::parse_query(prepared.bgp, prefixes_);
                } catch (const Error& e) {
                    query_error(q->query, e.what());
                }
                std::set<std::string> inner = names;
                inner.insert(parsed.selected.begin(), parsed.selected.end());
                for (const auto& key : prepared.order) {
                    if (std::find(parsed.selected.begin(), parsed.selected.end(), key.variable) ==
                        parsed.selected.end()) {
                        query_error(q->query, "ORDER BY ?" + key.variable + " is not selected");
                    }
                }
                validate(q->body, inner);
                validate(q->empty, names);
            }
        }
    }

    void render(const Nodes& nodes, const Scope& scope, const std::map<std::string, double>& bar_max,
                std::string& out) const {
        for (const auto& node : nodes) {
            if (const auto* t = std::get_if<TextNode>(&node)) {
                out += t->text;
            } else if (const auto* v = std::get_if<VarNode>(&node)) {
                const auto it = bar_max.find(v->name);
                out += apply_filter(scope.at(v->name), v->filter, it == bar_max.end() ? 0.0 : it->second);
            } else {
                render_query(std::get<QueryNode>(node), scope, bar_max, out);
            }
        }
    }

private:
    void render_query(const QueryNode& q, const Scope& scope, const std::map<std::string, double>& outer_max,
                      std::string& out) const {
        std::set<std::string> names;
        for (const auto& [name, term] : scope) {
            names.insert(name);
        }
        const PreparedQuery prepared = prepare(substitute(q.query, &scope, names));
        graph::QueryResult result;
        try {
            result = graph::query_bgp(store_, graph::parse_query(prepared.bgp, prefixes_));
        } catch (const Error& e) {
            query_error(q.query, e.what());
        }
        auto& rows = result.rows;
        if (!prepared.order.empty()) {
            std::stable_sort(rows.begin(), rows.end(), [&](const graph::BindingSet& a, const graph::BindingSet& b) {
                for (const auto& key : prepared.order) {
                    const int c = compare_terms(a.at(key.variable), b.at(key.variable));
                    if (c != 0) {
                        return key.descending ? c > 0 : c < 0;
                    }
                }
                return false;
            });
        }
        if (prepared.limit && rows.size() > *prepared.limit) {
            rows.resize(*prepared.limit);
        }
        if (rows.empty()) {
            render(q.empty, scope, outer_max, out);
            return;
        }
        std::map<std::string, double> bar_max = outer_max;
        for (const auto& name : result.variables) {
            double m = 0.0;
            for (const auto& row : rows) {
                if (const auto v = numeric_value(row.at(name))) {
                    m = std::max(m, *v);
                }
            }
            bar_max[name] = m;
        }
        for (const auto& row : rows) {
            Scope inner = scope;
            for (const auto& [name, term] : row) {
                inner.insert_or_assign(name, term);
            }
            render(q.body, inner, bar_max, out);
        }
    }

    const graph::GraphStore& store_;
    graph::PrefixMap prefixes_;
};

constexpr std::string_view kDefaultTemplate = R"TPL(<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>Data report: {name}</title>
<style>
body { font-family: Helvetica, Arial, sans-serif; margin: 2em; color: #222; }
h1 { font-size: 1.6em; }
h2 { border-bottom: 1px solid #ccc; padding-bottom: 4px; }
.column { border: 1px solid #ddd; border-radius: 4px; padding: 8px 16px; margin: 12px 0; }
.column h3 a { text-decoration: none; color: #1a4f8b; }
.label { color: #555; font-weight: normal; }
table { border-collapse: collapse; }
th, td { padding: 2px 10px; text-align: left; vertical-align: top; }
th[title] { cursor: help; }
td.bar { color: #4a7ab5; letter-spacing: -1px; }
td.value { font-family: monospace; white-space: pre; }
td.value:empty::after { content: "(empty)"; color: #999; font-style: italic; }
.empty { color: #8a5a00; }
</style>
</head>
<body>
<h1>Data report: {name}</h1>
<section class="summary">
<h2>Resource summary</h2>
<table class="dims">
<tr><th title="Resource IRI">Resource</th><td><code>{table}</code></td></tr>
<tr><th title="Number of rows including any header row">Rows</th><td>{rows}</td></tr>
<tr><th title="Number of columns">Columns</th><td>{cols}</td></tr>
</table>
</section>
<section class="columns">
<h2>Column statistics</h2>
{{query: SELECT ?c ?i ?total ?distinct ?blank ?empty WHERE { ?c du:columnOf {table} . ?c du:columnIndex ?i . ?c du:totalCount ?total . ?c du:distinctCount ?distinct . ?c du:blankCount ?blank . ?c du:emptyCount ?empty } ORDER BY ?i |
<div class="column" id="{c:fragment}">
<h3><a href="{c}" title="Column {i} of {name}: open the column in the data browser">{c:fragment}</a> {{query: SELECT ?label WHERE { {c} rdfs:label ?label } |<span class="label">{label}</span>}}</h3>
<table class="stats">
<tr><th title="Number of data values in the column">Total values</th><td>{total}</td></tr>
<tr><th title="Number of different values, empty and blank included">Distinct values</th><td>{distinct}</td></tr>
<tr><th title="Values made only of whitespace">Blank values</th><td>{blank}</td></tr>
<tr><th title="Values of length zero">Empty values</th><td>{empty}</td></tr>
{{query: SELECT ?min ?avg ?sd ?max WHERE { {c} du:minLength ?min . {c} du:avgLength ?avg . {c} du:stdDevLength ?sd . {c} du:maxLength ?max } |<tr><th title="Shortest value length in characters">Minimum length</th><td>{min}</td></tr>
<tr><th title="Mean value length in characters">Average length</th><td>{avg}</td></tr>
<tr><th title="Population standard deviation of value lengths">Std. deviation of length</th><td>{sd}</td></tr>
<tr><th title="Longest value length in characters">Maximum length</th><td>{max}</td></tr>
}}</table>
<h4>Most frequent values</h4>
<table class="histogram">
{{query: SELECT ?e ?v ?f WHERE { {c} du:histogramEntry ?e . ?e du:value ?v . ?e du:frequency ?f } ORDER BY DESC(?f) ?v LIMIT 10 |<tr><td class="value">{v:short}</td><td class="bar" title="frequency {f}">{f:bar}</td><td>{f}</td></tr>
{{else}}<tr><td>no values</td></tr>
}}</table>
</div>
{{else}}<p class="empty">No analyses recorded for this table.</p>
}}</section>
</body>
</html>
)TPL";

}  // namespace

ReportTemplate ReportTemplate::parse(std::string name, std::string text) {
    ReportTemplate tmpl;
    tmpl.nodes_ = TemplateParser(text).parse();
    tmpl.name_ = std::move(name);
    tmpl.text_ = std::move(text);
    return tmpl;
}

std::string serialize(const Nodes& nodes) {
    std::string out;
    serialize_into(nodes, out);
    return out;
}

ReportTemplate default_template() { return ReportTemplate::parse("default", std::string(kDefaultTemplate)); }

std::string render_report(const graph::GraphStore& store, const resources::TableResource& table,
                          const ReportTemplate& tmpl, const vocab::Vocabulary& vocabulary) {
    const std::string& iri = table.base_iri();
    const auto slash = iri.find_last_of('/');
    const std::string name = resources::decode_path(slash == std::string::npos ? iri : iri.substr(slash + 1));

    Scope scope;
    scope.insert_or_assign("table", graph::Term::iri(iri));
    scope.insert_or_assign("name", graph::Term::literal(name));
    scope.insert_or_assign("rows", graph::Term::integer(static_cast<long long>(table.row_count())));
    scope.insert_or_assign("cols", graph::Term::integer(static_cast<long long>(table.col_count())));

    const Renderer renderer(store, vocabulary.prefixes());
    renderer.validate(tmpl.nodes(), {"table", "name", "rows", "cols"});
    std::string out;
    renderer.render(tmpl.nodes(), scope, {}, out);
    return out;
}

}  // namespace datacat::report
