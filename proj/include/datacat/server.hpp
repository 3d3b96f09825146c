#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "datacat/error.hpp"
#include "datacat/graphstore.hpp"
#include "datacat/profiler.hpp"
#include "datacat/resources.hpp"
#include "datacat/vocab.hpp"

namespace datacat::server {

struct ApiError {
    int http_status;
    std::string code;
    std::string message;
};

int http_status(ErrorCode code) noexcept;
ApiError to_api_error(const Error& error);

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

/// A graph shared between request threads: many readers or one writer.
class SharedGraph {
public:
    template <typename Fn>
    decltype(auto) read(Fn&& fn) const {
        std::shared_lock lock(mutex_);
        return fn(static_cast<const graph::GraphStore&>(store_));
    }

    template <typename Fn>
    decltype(auto) write(Fn&& fn) {
        std::unique_lock lock(mutex_);
        return fn(store_);
    }

private:
    mutable std::shared_mutex mutex_;
    graph::GraphStore store_;
};

struct ServiceConfig {
    std::string origin = "http://localhost:8080";
    std::optional<std::filesystem::path> graph_file;  // write-through persistence
    std::size_t histogram_cap = profiler::kDefaultHistogramCap;
    std::size_t page_size = 50;
    std::optional<std::filesystem::path> ui_dir;  // static files served at "/"
};

/// Writes `text` to `path` through a temporary file and a rename.
void write_file_atomically(const std::filesystem::path& path, const std::string& text);

/// Route logic independent of the HTTP transport. Every handler returns a
/// response; module errors become JSON bodies {"error":{"code","message"}}.
class CatalogService {
public:
    CatalogService(std::shared_ptr<resources::ResourceRegistry> registry, ServiceConfig config);

    /// Loads the configured graph file if it exists. Returns triples added.
    std::size_t load_graph();

    // GET /api/resources
    Response list_resources() const;
    // GET /api/resource?iri&sel&page
    Response resource_view(const std::optional<std::string>& iri, const std::optional<std::string>& sel,
                           const std::optional<std::string>& page) const;
    // POST /api/triples
    Response add_triple(const std::string& body);
    // DELETE /api/triples
    Response remove_triple(const std::string& body);
    // GET /api/triples?subject
    Response list_triples(const std::optional<std::string>& subject) const;
    // POST /api/query
    Response query(const std::string& body) const;
    // POST /api/profile?iri
    Response profile(const std::optional<std::string>& iri);
    // GET /report?iri
    Response report(const std::optional<std::string>& iri) const;
    // GET /vocab
    Response vocabulary_page() const;
    // GET /res/<path>?sel&page: HTML view of a resource
    Response resource_page(const std::string& decoded_path, const std::optional<std::string>& sel,
                           const std::optional<std::string>& page) const;
    // GET /
    Response index_page() const;

    const ServiceConfig& config() const noexcept { return config_; }
    const vocab::Vocabulary& vocabulary() const noexcept { return vocabulary_; }
    const resources::ResourceRegistry& registry() const noexcept { return *registry_; }
    SharedGraph& graph() noexcept { return graph_; }
    const SharedGraph& graph() const noexcept { return graph_; }

private:
    void persist(const graph::GraphStore& store) const;

    std::shared_ptr<resources::ResourceRegistry> registry_;
    ServiceConfig config_;
    vocab::Vocabulary vocabulary_;
    SharedGraph graph_;
};

/// HTTP/1.1 front end for a CatalogService.
class HttpServer {
public:
    explicit HttpServer(CatalogService& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    bool bind(const std::string& host, int port);
    /// Binds an ephemeral port and returns it, or -1.
    int bind_to_any_port(const std::string& host);
    /// Blocks until stop() is called.
    bool listen_after_bind();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace datacat::server
