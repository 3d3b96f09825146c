#include <fstream>
#include <sstream>

#include <json.hpp>

#include "datacat/deeplink.hpp"
#include "datacat/html.hpp"
#include "datacat/reportgen.hpp"
#include "datacat/resolve.hpp"
#include "datacat/server.hpp"

namespace datacat::server {

namespace fs = std::filesystem;
using json = nlohmann::json;
using resources::TableResource;
using resources::TextResource;

int http_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::UnknownResource:
        case ErrorCode::FileNotFound:
            return 404;
        case ErrorCode::IoError:
            return 500;
        default:
            return 400;
    }
}

ApiError to_api_error(const Error& error) {
    return ApiError{http_status(error.code()), std::string(to_string(error.code())), error.what()};
}

void write_file_atomically(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        }
        out << text;
        if (!out.flush()) {
            throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw Error(ErrorCode::IoError, "cannot replace " + path.string() + ": " + ec.message());
    }
}

namespace {

Response json_response(int status, const json& body) { return Response{status, "application/json", body.dump()}; }

Response error_response(const Error& e) {
    const ApiError api = to_api_error(e);
    return json_response(api.http_status, json{{"error", {{"code", api.code}, {"message", api.message}}}});
}

template <typename Fn>
Response guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        return error_response(e);
    } catch (const std::exception& e) {
        return json_response(500, json{{"error", {{"code", "InternalError"}, {"message", e.what()}}}});
    }
}

const std::string& required(const std::optional<std::string>& value, const char* name) {
    if (!value || value->empty()) {
        throw Error(ErrorCode::MissingParameter, std::string("missing query parameter '") + name + "'");
    }
    return *value;
}

std::size_t parse_page(const std::optional<std::string>& page) {
    if (!page || page->empty()) {
        return 1;
    }
    std::size_t value = 0;
    for (const char c : *page) {
        if (c < '0' || c > '9' || value > 1'000'000'000) {
            throw Error(ErrorCode::SyntaxError, "page must be a positive integer");
        }
        value = value * 10 + static_cast<std::size_t>(c - '0');
    }
    if (value == 0) {
        throw Error(ErrorCode::BoundsError, "pages are 1-based");
    }
    return value;
}

json triple_json(const graph::Triple& t) {
    return json{{"subject", t.subject.to_ntriples()},
                {"predicate", t.predicate.to_ntriples()},
                {"object", t.object.to_ntriples()}};
}

graph::Triple triple_from_body(const std::string& body) {
    const auto first = body.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && body[first] == '{') {
        json doc;
        try {
            doc = json::parse(body);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError, std::string("request body is not valid JSON: ") + e.what());
        }
        auto field = [&](const char* name) -> std::string {
            if (!doc.contains(name) || !doc[name].is_string()) {
                throw Error(ErrorCode::ParseError, std::string("missing string field '") + name + "'");
            }
            return doc[name].get<std::string>();
        };
        return graph::Triple{graph::parse_term(field("subject")), graph::parse_term(field("predicate")),
                             graph::parse_term(field("object"))};
    }
    std::string line = body;
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
        line.pop_back();
    }
    return graph::parse_triple(line);
}

std::string query_text_from_body(const std::string& body) {
    const auto first = body.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && body[first] == '{') {
        try {
            const json doc = json::parse(body);
            if (doc.contains("query") && doc["query"].is_string()) {
                return doc["query"].get<std::string>();
            }
        } catch (const json::exception&) {
        }
        throw Error(ErrorCode::ParseError, "expected query text or {\"query\": \"...\"}");
    }
    return body;
}

struct Page {
    std::size_t number = 1;
    std::size_t count = 1;
    std::size_t first = 1;  // absolute row/line
    std::size_t last = 0;
};

Page paginate(const deeplink::Bounds& region, std::size_t page, std::size_t page_size) {
    const std::size_t rows = region.row_count();
    Page p;
    p.count = rows == 0 ? 1 : (rows + page_size - 1) / page_size;
    if (page > p.count) {
        throw Error(ErrorCode::OutOfBounds,
                    "page " + std::to_string(page) + " is beyond the last page " + std::to_string(p.count));
    }
    p.number = page;
    p.first = region.first_row + (page - 1) * page_size;
    p.last = rows == 0 ? region.first_row - 1 : std::min(region.last_row, p.first + page_size - 1);
    return p;
}

std::string cell_iri(const std::string& base, std::size_t row, std::size_t col) {
    return base + "#" + deeplink::serialize(deeplink::single_cell(row, col));
}

std::string row_iri(const std::string& base, std::size_t row) {
    return base + "#" + deeplink::serialize(deeplink::RowRange{row, deeplink::EndBound::at(row)});
}

std::string col_iri(const std::string& base, std::size_t col) {
    return base + "#" + deeplink::serialize(deeplink::ColRange{col, deeplink::EndBound::at(col)});
}

std::string line_iri(const std::string& base, std::size_t line) {
    return base + "#" + deeplink::serialize(deeplink::LineRange{line, deeplink::EndBound::at(line)});
}

json bounds_json(const deeplink::Bounds& b) {
    return json{{"firstRow", b.first_row}, {"lastRow", b.last_row}, {"firstCol", b.first_col}, {"lastCol", b.last_col}};
}

// Region payload shared by the JSON and HTML views.
json region_payload(const deeplink::DeepLink& link, const deeplink::ResolvedRegion& region, std::size_t page_number,
                    std::size_t page_size) {
    const std::string& base = link.base_iri;
    const Page page = paginate(region.bounds, page_number, page_size);
    json out;
    out["iri"] = base;
    out["selector"] = link.selector ? json(deeplink::serialize(*link.selector)) : json(nullptr);
    out["selectionIri"] = link.to_string();
    out["bounds"] = bounds_json(region.bounds);
    out["page"] = page.number;
    out["pageSize"] = page_size;
    out["pageCount"] = page.count;
    out["hasPrev"] = page.number > 1;
    out["hasNext"] = page.number < page.count;

    if (const auto* tp = std::get_if<std::shared_ptr<const TableResource>>(&region.resource)) {
        const TableResource& table = **tp;
        out["kind"] = "table";
        out["rowCount"] = table.row_count();
        out["colCount"] = table.col_count();
        out["headerRow"] = table.header_row();
        json columns = json::array();
        for (std::size_t c = region.bounds.first_col; c <= region.bounds.last_col; ++c) {
            json col{{"index", c}, {"label", deeplink::column_letters(c)}, {"iri", col_iri(base, c)}};
            if (table.header_row()) {
                col["header"] = table.cell(1, c);
            }
            columns.push_back(std::move(col));
        }
        out["columns"] = std::move(columns);
        json rows = json::array();
        for (std::size_t r = page.first; r <= page.last; ++r) {
            json cells = json::array();
            for (std::size_t c = region.bounds.first_col; c <= region.bounds.last_col; ++c) {
                cells.push_back(json{{"col", c},
                                     {"a1", deeplink::column_letters(c) + std::to_string(r)},
                                     {"value", table.cell(r, c)},
                                     {"iri", cell_iri(base, r, c)}});
            }
            rows.push_back(json{{"index", r}, {"iri", row_iri(base, r)}, {"cells", std::move(cells)}});
        }
        out["rows"] = std::move(rows);
    } else {
        const TextResource& text = *std::get<std::shared_ptr<const TextResource>>(region.resource);
        out["kind"] = "text";
        out["lineCount"] = text.line_count();
        json lines = json::array();
        for (std::size_t l = page.first; l <= page.last; ++l) {
            lines.push_back(json{{"index", l}, {"iri", line_iri(base, l)}, {"text", text.lines()[l - 1]}});
        }
        out["lines"] = std::move(lines);
    }
    return out;
}

deeplink::DeepLink link_from_params(const std::string& iri, const std::optional<std::string>& sel) {
    deeplink::DeepLink link = deeplink::DeepLink::parse(iri);
    if (sel && !sel->empty()) {
        link.selector = deeplink::parse_fragment(*sel);
    }
    return link;
}

std::string file_name_of(const std::string& base_iri) {
    const auto slash = base_iri.find_last_of('/');
    return resources::decode_path(slash == std::string::npos ? base_iri : base_iri.substr(slash + 1));
}

std::string page_head(const std::string& title) {
    return "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>" + html::escape(title) +
           "</title>\n<style>body { font-family: sans-serif; margin: 2em; } table { border-collapse: collapse; } "
           "td, th { border: 1px solid #ccc; padding: 2px 6px; } th { background: #f2f2f2; } "
           ".sel { background: #fff3b0; } .triples { background: #eee; padding: 8px; } "
           "a { text-decoration: none; }</style>\n</head>\n<body>\n";
}

}  // namespace

CatalogService::CatalogService(std::shared_ptr<resources::ResourceRegistry> registry, ServiceConfig config)
    : registry_(std::move(registry)), config_(std::move(config)), vocabulary_(config_.origin) {}

std::size_t CatalogService::load_graph() {
    if (!config_.graph_file || !fs::exists(*config_.graph_file)) {
        return 0;
    }
    const std::string text = resources::read_utf8_file(*config_.graph_file);
    return graph_.write([&](graph::GraphStore& store) { return graph::import_ntriples(store, text); });
}

void CatalogService::persist(const graph::GraphStore& store) const {
    if (config_.graph_file) {
        write_file_atomically(*config_.graph_file, graph::export_ntriples(store));
    }
}

Response CatalogService::list_resources() const {
    return guarded([&] {
        json list = json::array();
        for (const auto& ref : registry_->all()) {
            json entry{{"iri", resources::base_iri_of(ref)}};
            if (const auto* t = std::get_if<std::shared_ptr<const TableResource>>(&ref)) {
                entry["kind"] = "table";
                entry["rowCount"] = (*t)->row_count();
                entry["colCount"] = (*t)->col_count();
            } else {
                entry["kind"] = "text";
                entry["lineCount"] = std::get<std::shared_ptr<const TextResource>>(ref)->line_count();
            }
            list.push_back(std::move(entry));
        }
        return json_response(200, json{{"resources", std::move(list)}});
    });
}

Response CatalogService::resource_view(const std::optional<std::string>& iri, const std::optional<std::string>& sel,
                                       const std::optional<std::string>& page) const {
    return guarded([&] {
        const deeplink::DeepLink link = link_from_params(required(iri, "iri"), sel);
        const std::size_t page_number = parse_page(page);
        const deeplink::ResolvedRegion region = deeplink::resolve(link, *registry_);
        return json_response(200, region_payload(link, region, page_number, config_.page_size));
    });
}

Response CatalogService::add_triple(const std::string& body) {
    return guarded([&] {
        const graph::Triple triple = triple_from_body(body);
        const bool inserted = graph_.write([&](graph::GraphStore& store) {
            const bool added = store.insert(triple);
            if (added) {
                persist(store);
            }
            return added;
        });
        return json_response(inserted ? 201 : 200, json{{"inserted", inserted}, {"triple", triple_json(triple)}});
    });
}

Response CatalogService::remove_triple(const std::string& body) {
    return guarded([&] {
        const graph::Triple triple = triple_from_body(body);
        const bool removed = graph_.write([&](graph::GraphStore& store) {
            const bool gone = store.remove(triple);
            if (gone) {
                persist(store);
            }
            return gone;
        });
        return json_response(200, json{{"removed", removed}, {"triple", triple_json(triple)}});
    });
}

Response CatalogService::list_triples(const std::optional<std::string>& subject) const {
    return guarded([&] {
        graph::TriplePattern pattern{graph::Variable{"s"}, graph::Variable{"p"}, graph::Variable{"o"}};
        if (subject && !subject->empty()) {
            const char first = subject->front();
            pattern.subject = (first == '<' || first == '_') ? graph::parse_term(*subject) : graph::Term::iri(*subject);
        }
        auto triples = graph_.read([&](const graph::GraphStore& store) { return store.match(pattern); });
        std::vector<std::tuple<std::string, std::string, std::string>> rows;
        rows.reserve(triples.size());
        for (const auto& t : triples) {
            rows.emplace_back(t.subject.to_ntriples(), t.predicate.to_ntriples(), t.object.to_ntriples());
        }
        std::sort(rows.begin(), rows.end());
        json list = json::array();
        for (const auto& [s, p, o] : rows) {
            list.push_back(json{{"subject", s}, {"predicate", p}, {"object", o}});
        }
        return json_response(200, json{{"triples", std::move(list)}});
    });
}

Response CatalogService::query(const std::string& body) const {
    return guarded([&] {
        const graph::BgpQuery q = graph::parse_query(query_text_from_body(body), vocabulary_.prefixes());
        const graph::QueryResult result =
            graph_.read([&](const graph::GraphStore& store) { return graph::query_bgp(store, q); });
        json bindings = json::array();
        for (const auto& row : result.rows) {
            json b = json::object();
            for (const auto& [name, term] : row) {
                b[name] = term.to_ntriples();
            }
            bindings.push_back(std::move(b));
        }
        return json_response(200, json{{"variables", result.variables}, {"bindings", std::move(bindings)}});
    });
}

Response CatalogService::profile(const std::optional<std::string>& iri) {
    return guarded([&] {
        const auto table = registry_->find_table(required(iri, "iri"));
        const auto profiles = profiler::profile_table(*table, config_.histogram_cap);
        std::vector<graph::Triple> triples;
        for (const auto& p : profiles) {
            auto part = profiler::profile_to_triples(p, vocabulary_);
            triples.insert(triples.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        }
        const auto [added, total] = graph_.write([&](graph::GraphStore& store) {
            std::size_t n = 0;
            for (const auto& t : triples) {
                n += store.insert(t) ? 1 : 0;
            }
            if (n > 0) {
                persist(store);
            }
            return std::pair{n, store.size()};
        });
        return json_response(200, json{{"iri", table->base_iri()},
                                       {"columns", profiles.size()},
                                       {"triplesAdded", added},
                                       {"triplesTotal", total}});
    });
}

Response CatalogService::report(const std::optional<std::string>& iri) const {
    return guarded([&] {
        const auto table = registry_->find_table(required(iri, "iri"));
        const auto tmpl = report::default_template();
        std::string html = graph_.read([&](const graph::GraphStore& store) {
            return report::render_report(store, *table, tmpl, vocabulary_);
        });
        return Response{200, "text/html; charset=utf-8", std::move(html)};
    });
}

Response CatalogService::vocabulary_page() const {
    return Response{200, "text/html; charset=utf-8", vocab::render_vocabulary_page(vocabulary_)};
}

Response CatalogService::resource_page(const std::string& decoded_path, const std::optional<std::string>& sel,
                                       const std::optional<std::string>& page) const {
    return guarded([&] {
        const std::string base = registry_->server_origin() + "/res/" + resources::encode_path(decoded_path);
        const deeplink::DeepLink link = link_from_params(base, sel);
        const deeplink::ResolvedRegion region = deeplink::resolve(link, *registry_);
        const json payload = region_payload(link, region, parse_page(page), config_.page_size);
        const auto subject = graph::Term::iri(link.to_string());
        const auto triples = graph_.read([&](const graph::GraphStore& store) {
            return store.match({subject, graph::Variable{"p"}, graph::Variable{"o"}});
        });

        std::ostringstream out;
        out << page_head(file_name_of(base)) << "<p><code>" << html::escape(link.to_string()) << "</code></p>\n";
        out << "<div class=\"triples\"><strong>Statements about this selection</strong><ul>\n";
        for (const auto& t : triples) {
            out << "<li><code>" << html::escape(t.predicate.to_ntriples()) << " "
                << html::escape(t.object.to_ntriples()) << "</code></li>\n";
        }
        out << "</ul></div>\n";
        const auto& b = region.bounds;
        auto selected = [&](std::size_t r, std::size_t c) {
            return link.selector && r >= b.first_row && r <= b.last_row && c >= b.first_col && c <= b.last_col;
        };
        if (payload["kind"] == "table") {
            out << "<table>\n<tr><th></th>";
            for (const auto& col : payload["columns"]) {
                out << "<th><a href=\"" << html::escape(col["iri"].get<std::string>()) << "\" title=\"Column "
                    << col["index"].get<std::size_t>() << "\">" << html::escape(col["label"].get<std::string>())
                    << "</a></th>";
            }
            out << "</tr>\n";
            for (const auto& row : payload["rows"]) {
                const auto r = row["index"].get<std::size_t>();
                out << "<tr><th><a href=\"" << html::escape(row["iri"].get<std::string>()) << "\" title=\"Row " << r
                    << "\">" << r << "</a></th>";
                for (const auto& cell : row["cells"]) {
                    const auto c = cell["col"].get<std::size_t>();
                    out << "<td" << (selected(r, c) ? " class=\"sel\"" : "") << "><a href=\""
                        << html::escape(cell["iri"].get<std::string>()) << "\" title=\""
                        << html::escape(cell["a1"].get<std::string>()) << "\">"
                        << html::escape(cell["value"].get<std::string>()) << "</a></td>";
                }
                out << "</tr>\n";
            }
            out << "</table>\n";
        } else {
            out << "<table>\n";
            for (const auto& line : payload["lines"]) {
                const auto l = line["index"].get<std::size_t>();
                out << "<tr><th><a href=\"" << html::escape(line["iri"].get<std::string>()) << "\" title=\"Line " << l
                    << "\">" << l << "</a></th><td" << (selected(l, 1) ? " class=\"sel\"" : "") << "><pre>"
                    << html::escape(line["text"].get<std::string>()) << "</pre></td></tr>\n";
            }
            out << "</table>\n";
        }
        // Fragments stay in the browser; turn them into a "sel" parameter.
        out << "<script>function go(){var h=location.hash.slice(1);if(h){location.replace(location.pathname+"
               "'?sel='+encodeURIComponent(h));}}window.addEventListener('hashchange',go);go();</script>\n"
            << "</body>\n</html>\n";
        return Response{200, "text/html; charset=utf-8", out.str()};
    });
}

Response CatalogService::index_page() const {
    std::ostringstream out;
    out << page_head("Data catalog") << "<h1>Data catalog</h1>\n<table>\n<tr><th>Resource</th><th>Kind</th><th>"
        << "Report</th></tr>\n";
    for (const auto& ref : registry_->all()) {
        const std::string& iri = resources::base_iri_of(ref);
        const bool is_table = std::holds_alternative<std::shared_ptr<const TableResource>>(ref);
        out << "<tr><td><a href=\"" << html::escape(iri) << "\" title=\"Browse\">" << html::escape(file_name_of(iri))
            << "</a></td><td>" << (is_table ? "table" : "text") << "</td><td>";
        if (is_table) {
            out << "<a href=\"/report?iri=" << html::escape(resources::encode_path(iri))
                << "\" title=\"Analysis report\">report</a>";
        }
        out << "</td></tr>\n";
    }
    out << "</table>\n<p><a href=\"/vocab\" title=\"Vocabulary reference\">Vocabulary</a></p>\n</body>\n</html>\n";
    return Response{200, "text/html; charset=utf-8", out.str()};
}

}  // namespace datacat::server
