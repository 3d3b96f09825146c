#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "datacat/deeplink.hpp"

namespace datacat::resources {

struct CsvConfig {
    char delimiter = ',';
    bool header_row = true;
};

/// Immutable row-major grid loaded from CSV. Indices are 1-based and row 1
/// is addressable even when it is a header.
class TableResource {
public:
    TableResource(std::string base_iri, std::filesystem::path source_path,
                  std::vector<std::vector<std::string>> records, bool header_row);

    const std::string& base_iri() const noexcept { return base_iri_; }
    const std::filesystem::path& source_path() const noexcept { return source_path_; }
    std::size_t row_count() const noexcept { return row_count_; }
    std::size_t col_count() const noexcept { return col_count_; }
    bool header_row() const noexcept { return header_row_; }

    const std::string& cell(std::size_t row, std::size_t col) const;

    /// Values of one column from `first_row` downwards.
    std::vector<std::string_view> column(std::size_t col, std::size_t first_row = 1) const;

    friend bool operator==(const TableResource&, const TableResource&) = default;

private:
    std::string base_iri_;
    std::filesystem::path source_path_;
    std::vector<std::string> cells_;
    std::size_t row_count_ = 0;
    std::size_t col_count_ = 0;
    bool header_row_ = true;
};

/// Immutable documentation text split into lines without terminators.
class TextResource {
public:
    TextResource(std::string base_iri, std::filesystem::path source_path, std::vector<std::string> lines)
        : base_iri_(std::move(base_iri)), source_path_(std::move(source_path)), lines_(std::move(lines)) {}

    const std::string& base_iri() const noexcept { return base_iri_; }
    const std::filesystem::path& source_path() const noexcept { return source_path_; }
    const std::vector<std::string>& lines() const noexcept { return lines_; }
    std::size_t line_count() const noexcept { return lines_.size(); }

    friend bool operator==(const TextResource&, const TextResource&) = default;

private:
    std::string base_iri_;
    std::filesystem::path source_path_;
    std::vector<std::string> lines_;
};

using ResourceRef = std::variant<std::shared_ptr<const TableResource>, std::shared_ptr<const TextResource>>;

/// RFC 4180 records from UTF-8 text. Quoted fields may contain the delimiter,
/// doubled quotes, and line breaks. A trailing line break ends the last
/// record without starting another.
std::vector<std::vector<std::string>> parse_csv(std::string_view text, char delimiter = ',');

/// Splits on LF, CRLF, or lone CR; a final terminator adds no empty line.
std::vector<std::string> split_lines(std::string_view text);

/// Reads a file as bytes. Throws Error(FileNotFound) or Error(EncodingError).
std::string read_utf8_file(const std::filesystem::path& path);

TableResource load_csv(const std::filesystem::path& path, std::string base_iri, const CsvConfig& config = {});
TextResource load_text(const std::filesystem::path& path, std::string base_iri);

/// Rectangular excerpt with its absolute coordinates.
struct CellGrid {
    deeplink::Bounds bounds;
    std::vector<std::vector<std::string>> rows;
};

/// Throws Error(SelectorKindMismatch) for line selectors and
/// Error(OutOfBounds) when the selector starts beyond the table.
CellGrid get_region(const TableResource& table, const deeplink::Selector& sel);

CellGrid get_region(const TableResource& table, const deeplink::Bounds& bounds);

/// Percent-encodes a relative path for use under "<origin>/res/". Unreserved
/// characters and '/' pass through.
std::string encode_path(std::string_view relative);

/// Inverse of encode_path. Throws Error(SyntaxError) on bad escapes.
std::string decode_path(std::string_view encoded);

/// Loaded resources keyed by base IRI. Lookups may run concurrently;
/// registrations are serialized.
class ResourceRegistry {
public:
    ResourceRegistry(std::filesystem::path root_directory, std::string server_origin);

    const std::filesystem::path& root_directory() const noexcept { return root_; }
    const std::string& server_origin() const noexcept { return origin_; }

    /// "<origin>/res/" + percent-encoded path relative to the root. Throws
    /// Error(OutOfBounds) for paths outside the root.
    std::string base_iri_for(const std::filesystem::path& path) const;

    std::shared_ptr<const TableResource> add_table(const std::filesystem::path& path, const CsvConfig& config = {});
    std::shared_ptr<const TextResource> add_text(const std::filesystem::path& path);

    /// Registers every *.csv as a table and every *.txt / *.md as text under
    /// the root. Files that fail to load are reported in the returned list and
    /// skipped.
    std::vector<std::string> scan(const CsvConfig& config = {});

    /// Throws Error(UnknownResource).
    ResourceRef find(std::string_view base_iri) const;
    std::shared_ptr<const TableResource> find_table(std::string_view base_iri) const;

    std::vector<ResourceRef> all() const;

private:
    std::filesystem::path root_;
    std::string origin_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, ResourceRef, std::less<>> resources_;
};

const std::string& base_iri_of(const ResourceRef& ref);

}  // namespace datacat::resources
