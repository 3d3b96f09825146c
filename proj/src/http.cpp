#include <httplib.h>

#include "datacat/server.hpp"

namespace datacat::server {

namespace {

std::optional<std::string> param(const httplib::Request& req, const char* name) {
    if (!req.has_param(name)) {
        return std::nullopt;
    }
    return req.get_param_value(name);
}

void send(httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
}

}  // namespace

struct HttpServer::Impl {
    explicit Impl(CatalogService& s) : service(s) {}

    CatalogService& service;
    httplib::Server http;
};

HttpServer::HttpServer(CatalogService& service) : impl_(std::make_unique<Impl>(service)) {
    auto& http = impl_->http;
    CatalogService& svc = service;

    http.Get("/api/resources", [&svc](const httplib::Request&, httplib::Response& res) {
        send(res, svc.list_resources());
    });
    http.Get("/api/resource", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.resource_view(param(req, "iri"), param(req, "sel"), param(req, "page")));
    });
    http.Post("/api/triples", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.add_triple(req.body));
    });
    http.Delete("/api/triples", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.remove_triple(req.body));
    });
    http.Get("/api/triples", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.list_triples(param(req, "subject")));
    });
    http.Post("/api/query", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.query(req.body));
    });
    http.Post("/api/profile", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.profile(param(req, "iri")));
    });
    http.Get("/report", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.report(param(req, "iri")));
    });
    http.Get("/vocab", [&svc](const httplib::Request&, httplib::Response& res) {
        send(res, svc.vocabulary_page());
    });
    http.Get(R"(/res/(.+))", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.resource_page(req.matches[1].str(), param(req, "sel"), param(req, "page")));
    });

    const auto& ui_dir = svc.config().ui_dir;
    if (ui_dir && std::filesystem::exists(*ui_dir / "index.html")) {
        http.set_mount_point("/", ui_dir->string());
    } else {
        http.Get("/", [&svc](const httplib::Request&, httplib::Response& res) { send(res, svc.index_page()); });
    }
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::bind(const std::string& host, int port) { return impl_->http.bind_to_port(host, port); }

int HttpServer::bind_to_any_port(const std::string& host) { return impl_->http.bind_to_any_port(host); }

bool HttpServer::listen_after_bind() { return impl_->http.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) {
        impl_->http.stop();
    }
}

void HttpServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace datacat::server
