#pragma once

// Helpers shared by the unit tests and the acceptance runner: scratch
// directories, random input generators, brute-force reference
// implementations, and an in-process HTTP server.

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "datacat/error.hpp"
#include "datacat/graphstore.hpp"
#include "datacat/server.hpp"

namespace testsupport {

namespace fs = std::filesystem;

using Rng = std::mt19937_64;

/// Directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const noexcept { return path_; }
    fs::path operator/(const fs::path& rel) const { return path_ / rel; }

private:
    fs::path path_;
};

void write_file(const fs::path& path, std::string_view content);
std::string read_file(const fs::path& path);

/// Code of the datacat::Error thrown by `fn`, or nullopt if none was thrown.
template <typename Fn>
std::optional<datacat::ErrorCode> error_code_of(Fn&& fn) {
    try {
        fn();
    } catch (const datacat::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

/// Location of tests/ in the source tree (fixtures, golden files).
fs::path source_dir();

// ---------------------------------------------------------------------------
// Generators

/// A valid fragment in canonical form ("row=3-*", "cell=2,5-9,5", ...).
std::string random_fragment(Rng& rng);

/// Hand-picked and systematically mutated fragment strings that must be
/// rejected with SyntaxError or BoundsError. At least 200 entries.
std::vector<std::string> invalid_fragments();

/// A cell value drawn from a mix of short tokens, multi-byte text, values
/// needing CSV quoting, empty strings and whitespace-only strings.
std::string random_value(Rng& rng);

using Records = std::vector<std::vector<std::string>>;

/// Ragged grid of at most max_rows records with 1..max_cols fields.
/// Columns alternate between low and high cardinality.
Records random_records(Rng& rng, std::size_t rows, std::size_t cols);

/// RFC 4180 text for `records`, quoting only where needed (plus a few
/// gratuitous quotes), CRLF or LF line ends.
std::string to_csv(const Records& records, Rng& rng, char delimiter = ',');

/// Triples over a small vocabulary so that joins are frequent. Includes
/// blank nodes, typed, language-tagged and escaped literals.
std::vector<datacat::graph::Triple> random_triples(Rng& rng, std::size_t count);

/// A connected BGP of 1..max_patterns patterns whose ground terms are taken
/// from `triples`. Selects a random non-empty subset of its variables.
datacat::graph::BgpQuery random_query(Rng& rng, const std::vector<datacat::graph::Triple>& triples,
                                      std::size_t max_patterns);

// ---------------------------------------------------------------------------
// Reference implementations

namespace oracle {

/// Column label -> index by enumerating A, B, ..., Z, AA, AB, ... in order.
std::map<std::string, std::size_t> enumerate_column_labels(std::size_t count);

std::size_t code_points(std::string_view utf8);
bool is_blank(std::string_view utf8);

struct Histogram {
    std::vector<std::pair<std::string, std::size_t>> entries;
    std::optional<std::size_t> overflow;  // folded frequency when capped
};

struct Profile {
    std::size_t total = 0;
    std::size_t distinct = 0;
    std::size_t blank = 0;
    std::size_t empty = 0;
    std::size_t min_length = 0;
    std::size_t max_length = 0;
    long double mean = 0;
    long double std_dev = 0;
    Histogram histogram;
};

Profile profile(const std::vector<std::string>& values, std::size_t cap);

/// Data values of column `col` (1-based) after padding ragged rows.
std::vector<std::string> column_values(const Records& records, std::size_t col, bool header_row);

using Row = std::vector<std::string>;  // N-Triples text per selected variable

/// Nested-loop join in pattern order over every triple. Returns nullopt when
/// an intermediate result exceeds `limit` bindings.
std::optional<std::set<Row>> nested_loop_join(const std::vector<datacat::graph::Triple>& triples,
                                              const datacat::graph::BgpQuery& query, std::size_t limit);

}  // namespace oracle

std::set<oracle::Row> as_rows(const datacat::graph::QueryResult& result);

// ---------------------------------------------------------------------------
// HTTP

/// CatalogService plus HttpServer listening on an ephemeral loopback port.
class LiveServer {
public:
    LiveServer(std::shared_ptr<datacat::resources::ResourceRegistry> registry,
               datacat::server::ServiceConfig config);
    ~LiveServer();

    int port() const noexcept { return port_; }
    datacat::server::CatalogService& service() noexcept { return service_; }

private:
    datacat::server::CatalogService service_;
    datacat::server::HttpServer http_;
    int port_ = -1;
    std::thread thread_;
};

/// `value` with every byte outside unreserved characters percent-encoded.
std::string url_encode(std::string_view value);

}  // namespace testsupport
