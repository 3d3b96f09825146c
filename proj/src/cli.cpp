#include "datacat/cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "datacat/error.hpp"
#include "datacat/graphstore.hpp"
#include "datacat/profiler.hpp"
#include "datacat/resources.hpp"
#include "datacat/server.hpp"
#include "datacat/vocab.hpp"

namespace datacat::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string root = ".";
    int port = 8080;
    std::string host = "127.0.0.1";
    std::string origin;
    std::string graph = "datacat.nt";
    std::string delimiter = ",";
    bool no_header = false;
    std::size_t histogram_cap = profiler::kDefaultHistogramCap;
    std::string ui_dir;

    std::vector<std::string> files;
    std::string query_text;
    std::string export_graph;
    std::string output;
    std::string input;
};

/// Raised for problems with the invocation itself (exit code 1).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_graph_option(CLI::App& cmd, Options& o) {
    cmd.add_option("--graph", o.graph, "N-Triples graph file")->envname("DATACAT_GRAPH")->capture_default_str();
}

void add_origin_options(CLI::App& cmd, Options& o) {
    cmd.add_option("--root", o.root, "Root data directory")->envname("DATACAT_ROOT")->capture_default_str();
    cmd.add_option("--port", o.port, "HTTP port (also sets the default origin)")
        ->envname("DATACAT_PORT")
        ->capture_default_str();
    cmd.add_option("--origin", o.origin, "Server origin used in IRIs (default http://localhost:<port>)");
}

void add_csv_options(CLI::App& cmd, Options& o) {
    cmd.add_option("--delimiter", o.delimiter, "CSV delimiter (one character, or 'tab')")->capture_default_str();
    cmd.add_flag("--no-header", o.no_header, "Row 1 is data, not a header");
    cmd.add_option("--histogram-cap", o.histogram_cap, "Maximum histogram entries per column")
        ->capture_default_str();
}

std::string origin_of(const Options& o) {
    return o.origin.empty() ? "http://localhost:" + std::to_string(o.port) : o.origin;
}

resources::CsvConfig csv_config(const Options& o) {
    resources::CsvConfig config;
    if (o.delimiter == "tab" || o.delimiter == "\\t") {
        config.delimiter = '\t';
    } else if (o.delimiter.size() == 1) {
        config.delimiter = o.delimiter[0];
    } else {
        throw UsageError("--delimiter must be a single character");
    }
    config.header_row = !o.no_header;
    return config;
}

graph::GraphStore load_graph_file(const fs::path& path, bool must_exist) {
    graph::GraphStore store;
    if (!must_exist && !fs::exists(path)) {
        return store;
    }
    graph::import_ntriples(store, resources::read_utf8_file(path));
    return store;
}

// Accepts a query wrapped in one pair of angle brackets, as in '<SELECT ...>'.
std::string unwrap_query(std::string text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    const auto last = text.find_last_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '<' || text[last] != '>') {
        return text;
    }
    std::string inner = text.substr(first + 1, last - first - 1);
    const auto start = inner.find_first_not_of(" \t\r\n");
    std::string head = start == std::string::npos ? "" : inner.substr(start, 6);
    std::transform(head.begin(), head.end(), head.begin(), [](unsigned char c) { return std::toupper(c); });
    return head == "SELECT" || head == "PREFIX" ? inner : text;
}

int cmd_serve(const Options& o, std::ostream& out, std::ostream& err) {
    auto registry = std::make_shared<resources::ResourceRegistry>(o.root, origin_of(o));
    for (const auto& problem : registry->scan(csv_config(o))) {
        err << "skipped " << problem << "\n";
    }
    server::ServiceConfig config;
    config.origin = origin_of(o);
    config.graph_file = fs::path(o.graph);
    config.histogram_cap = o.histogram_cap;
    if (!o.ui_dir.empty()) {
        config.ui_dir = fs::path(o.ui_dir);
    }
    server::CatalogService service(registry, config);
    const std::size_t loaded = service.load_graph();
    server::HttpServer http(service);
    if (!http.bind(o.host, o.port)) {
        err << "cannot listen on " << o.host << ":" << o.port << "\n";
        return kExitData;
    }
    out << "serving " << registry->all().size() << " resources from " << registry->root_directory().string()
        << " (" << loaded << " triples) on http://" << o.host << ":" << o.port << std::endl;
    http.listen_after_bind();
    return kExitOk;
}

int cmd_profile(const Options& o, std::ostream& out) {
    const resources::CsvConfig config = csv_config(o);
    resources::ResourceRegistry registry(o.root, origin_of(o));
    const vocab::Vocabulary vocabulary(origin_of(o));
    graph::GraphStore store = load_graph_file(o.graph, false);
    std::size_t total_added = 0;
    for (const auto& file : o.files) {
        const auto table = registry.add_table(file, config);
        std::size_t added = 0;
        const auto profiles = profiler::profile_table(*table, o.histogram_cap);
        for (const auto& p : profiles) {
            for (const auto& t : profiler::profile_to_triples(p, vocabulary)) {
                added += store.insert(t) ? 1 : 0;
            }
        }
        out << table->base_iri() << "\t" << profiles.size() << " columns\t" << added << " triples added\n";
        total_added += added;
    }
    if (total_added > 0 || !fs::exists(o.graph)) {
        server::write_file_atomically(o.graph, graph::export_ntriples(store));
    }
    return kExitOk;
}

int cmd_query(const Options& o, std::ostream& out) {
    const graph::GraphStore store = load_graph_file(o.graph, false);
    const vocab::Vocabulary vocabulary(origin_of(o));
    graph::BgpQuery query;
    try {
        query = graph::parse_query(unwrap_query(o.query_text), vocabulary.prefixes());
    } catch (const Error& e) {
        throw UsageError(std::string("query: ") + e.what());
    }
    graph::QueryResult result;
    try {
        result = graph::query_bgp(store, query);
    } catch (const Error& e) {
        throw UsageError(std::string("query: ") + e.what());
    }
    for (std::size_t i = 0; i < result.variables.size(); ++i) {
        out << (i ? "\t" : "") << result.variables[i];
    }
    out << "\n";
    for (const auto& row : result.rows) {
        for (std::size_t i = 0; i < result.variables.size(); ++i) {
            out << (i ? "\t" : "") << row.at(result.variables[i]).to_ntriples();
        }
        out << "\n";
    }
    return kExitOk;
}

int cmd_export(const Options& o, std::ostream& out) {
    const std::string source = o.export_graph.empty() ? o.graph : o.export_graph;
    const std::string text = graph::export_ntriples(load_graph_file(source, true));
    if (o.output.empty() || o.output == "-") {
        out << text;
    } else {
        server::write_file_atomically(o.output, text);
    }
    return kExitOk;
}

int cmd_import(const Options& o, std::ostream& out) {
    graph::GraphStore store = load_graph_file(o.graph, false);
    const std::size_t added = graph::import_ntriples(store, resources::read_utf8_file(o.input));
    server::write_file_atomically(o.graph, graph::export_ntriples(store));
    out << added << " triples added\n";
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Semantic data catalog: deep links into tables, RDF annotations, profiling and reports", "datacat"};
    app.require_subcommand(1, 1);

    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    add_origin_options(*serve, o);
    add_graph_option(*serve, o);
    add_csv_options(*serve, o);
    serve->add_option("--host", o.host, "Listen address")->capture_default_str();
    serve->add_option("--ui-dir", o.ui_dir, "Directory with a built web UI to serve at /");

    auto* profile = app.add_subcommand("profile", "Profile CSV files and store the statistics in the graph");
    profile->add_option("files", o.files, "CSV files")->required()->check(CLI::ExistingFile);
    add_origin_options(*profile, o);
    add_graph_option(*profile, o);
    add_csv_options(*profile, o);

    auto* query = app.add_subcommand("query", "Run a basic graph pattern query; prints TSV");
    query->add_option("query", o.query_text, "Query text, e.g. SELECT ?c WHERE { ?c du:distinctCount 1 }")
        ->required();
    add_graph_option(*query, o);
    query->add_option("--port", o.port, "Port used to derive the default origin")->envname("DATACAT_PORT");
    query->add_option("--origin", o.origin, "Server origin (defines the du: prefix)");

    auto* exp = app.add_subcommand("export", "Write the graph as sorted N-Triples");
    exp->add_option("graph-file", o.export_graph, "Graph file (defaults to --graph)");
    add_graph_option(*exp, o);
    exp->add_option("-o,--output", o.output, "Output file (default: stdout)");

    auto* imp = app.add_subcommand("import", "Add N-Triples from a file to the graph");
    imp->add_option("input", o.input, "N-Triples file")->required();
    add_graph_option(*imp, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*serve) return cmd_serve(o, out, err);
        if (*profile) return cmd_profile(o, out);
        if (*query) return cmd_query(o, out);
        if (*exp) return cmd_export(o, out);
        if (*imp) return cmd_import(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace datacat::cli
