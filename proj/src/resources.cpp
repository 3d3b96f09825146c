#include "datacat/resources.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <mutex>
#include <sstream>

#include "datacat/error.hpp"
#include "datacat/utf8.hpp"

namespace datacat::resources {

namespace fs = std::filesystem;

TableResource::TableResource(std::string base_iri, fs::path source_path,
                             std::vector<std::vector<std::string>> records, bool header_row)
    : base_iri_(std::move(base_iri)), source_path_(std::move(source_path)), header_row_(header_row) {
    if (records.empty()) {
        throw Error(ErrorCode::EmptyFile, "table has no records: " + source_path_.string());
    }
    row_count_ = records.size();
    for (const auto& rec : records) {
        col_count_ = std::max(col_count_, rec.size());
    }
    col_count_ = std::max<std::size_t>(col_count_, 1);
    cells_.reserve(row_count_ * col_count_);
    for (auto& rec : records) {
        for (auto& value : rec) {
            cells_.push_back(std::move(value));
        }
        for (std::size_t pad = rec.size(); pad < col_count_; ++pad) {
            cells_.emplace_back();
        }
    }
}

const std::string& TableResource::cell(std::size_t row, std::size_t col) const {
    if (row == 0 || row > row_count_ || col == 0 || col > col_count_) {
        throw Error(ErrorCode::OutOfBounds, "cell (" + std::to_string(row) + "," + std::to_string(col) +
                                                ") outside " + std::to_string(row_count_) + "x" +
                                                std::to_string(col_count_) + " table");
    }
    return cells_[(row - 1) * col_count_ + (col - 1)];
}

std::vector<std::string_view> TableResource::column(std::size_t col, std::size_t first_row) const {
    if (col == 0 || col > col_count_) {
        throw Error(ErrorCode::OutOfBounds, "column " + std::to_string(col) + " outside table with " +
                                                std::to_string(col_count_) + " columns");
    }
    std::vector<std::string_view> out;
    if (first_row == 0) {
        first_row = 1;
    }
    for (std::size_t r = first_row; r <= row_count_; ++r) {
        out.emplace_back(cells_[(r - 1) * col_count_ + (col - 1)]);
    }
    return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text, char delimiter) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    std::size_t i = 0;
    const std::size_t n = text.size();

    auto end_record = [&] {
        record.push_back(std::move(field));
        field.clear();
        records.push_back(std::move(record));
        record.clear();
    };

    while (i < n) {
        // At the start of a field.
        if (text[i] == '"') {
            ++i;
            while (i < n) {
                if (text[i] == '"') {
                    if (i + 1 < n && text[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                field.push_back(text[i++]);
            }
        }
        // Unquoted content, or stray characters after a closing quote.
        while (i < n && text[i] != delimiter && text[i] != '\n' && text[i] != '\r') {
            field.push_back(text[i++]);
        }
        if (i >= n) {
            end_record();
            break;
        }
        if (text[i] == delimiter) {
            record.push_back(std::move(field));
            field.clear();
            ++i;
            if (i == n) {
                end_record();
            }
            continue;
        }
        if (text[i] == '\r' && i + 1 < n && text[i + 1] == '\n') {
            ++i;
        }
        ++i;
        end_record();
    }
    return records;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '\n' || text[i] == '\r') {
            lines.emplace_back(text.substr(start, i - start));
            if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
                ++i;
            }
            start = ++i;
            continue;
        }
        ++i;
    }
    if (start < text.size()) {
        lines.emplace_back(text.substr(start));
    }
    return lines;
}

std::string read_utf8_file(const fs::path& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw Error(ErrorCode::FileNotFound, "no such file: " + path.string());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::FileNotFound, "cannot open file: " + path.string());
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (const auto bad = utf8::find_invalid(bytes)) {
        throw Error(ErrorCode::EncodingError,
                    path.string() + ": invalid UTF-8 at byte offset " + std::to_string(*bad));
    }
    if (bytes.rfind("\xEF\xBB\xBF", 0) == 0) {
        bytes.erase(0, 3);
    }
    return bytes;
}

TableResource load_csv(const fs::path& path, std::string base_iri, const CsvConfig& config) {
    const std::string bytes = read_utf8_file(path);
    auto records = parse_csv(bytes, config.delimiter);
    if (records.empty()) {
        throw Error(ErrorCode::EmptyFile, "no records in " + path.string());
    }
    return TableResource(std::move(base_iri), path, std::move(records), config.header_row);
}

TextResource load_text(const fs::path& path, std::string base_iri) {
    return TextResource(std::move(base_iri), path, split_lines(read_utf8_file(path)));
}

CellGrid get_region(const TableResource& table, const deeplink::Selector& sel) {
    return get_region(table, deeplink::clamp_table(sel, table.row_count(), table.col_count()));
}

CellGrid get_region(const TableResource& table, const deeplink::Bounds& bounds) {
    CellGrid grid{bounds, {}};
    grid.rows.reserve(bounds.row_count());
    for (std::size_t r = bounds.first_row; r <= bounds.last_row; ++r) {
        std::vector<std::string> row;
        row.reserve(bounds.col_count());
        for (std::size_t c = bounds.first_col; c <= bounds.last_col; ++c) {
            row.push_back(table.cell(r, c));
        }
        grid.rows.push_back(std::move(row));
    }
    return grid;
}

std::string encode_path(std::string_view relative) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(relative.size());
    for (const char ch : relative) {
        const auto c = static_cast<unsigned char>(ch);
        const bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                                c == '-' || c == '.' || c == '_' || c == '~' || c == '/';
        if (unreserved) {
            out.push_back(ch);
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0x0F]);
        }
    }
    return out;
}

std::string decode_path(std::string_view encoded) {
    auto hex = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw Error(ErrorCode::SyntaxError, "bad percent escape in '" + std::string(encoded) + "'");
    };
    std::string out;
    for (std::size_t i = 0; i < encoded.size(); ++i) {
        if (encoded[i] == '%') {
            if (i + 2 >= encoded.size()) {
                throw Error(ErrorCode::SyntaxError, "truncated percent escape in '" + std::string(encoded) + "'");
            }
            out.push_back(static_cast<char>(hex(encoded[i + 1]) * 16 + hex(encoded[i + 2])));
            i += 2;
        } else {
            out.push_back(encoded[i]);
        }
    }
    return out;
}

ResourceRegistry::ResourceRegistry(fs::path root_directory, std::string server_origin)
    : root_(fs::weakly_canonical(fs::absolute(root_directory))), origin_(std::move(server_origin)) {
    while (!origin_.empty() && origin_.back() == '/') {
        origin_.pop_back();
    }
}

std::string ResourceRegistry::base_iri_for(const fs::path& path) const {
    const fs::path full = fs::weakly_canonical(fs::absolute(path));
    const fs::path rel = full.lexically_relative(root_);
    const std::string rel_text = rel.generic_string();
    if (rel.empty() || rel_text == "." || rel_text.rfind("..", 0) == 0) {
        throw Error(ErrorCode::OutOfBounds, path.string() + " is not inside " + root_.string());
    }
    return origin_ + "/res/" + encode_path(rel_text);
}

std::shared_ptr<const TableResource> ResourceRegistry::add_table(const fs::path& path, const CsvConfig& config) {
    auto table = std::make_shared<const TableResource>(load_csv(path, base_iri_for(path), config));
    std::unique_lock lock(mutex_);
    resources_.insert_or_assign(table->base_iri(), table);
    return table;
}

std::shared_ptr<const TextResource> ResourceRegistry::add_text(const fs::path& path) {
    auto text = std::make_shared<const TextResource>(load_text(path, base_iri_for(path)));
    std::unique_lock lock(mutex_);
    resources_.insert_or_assign(text->base_iri(), text);
    return text;
}

std::vector<std::string> ResourceRegistry::scan(const CsvConfig& config) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (fs::recursive_directory_iterator it(root_, fs::directory_options::skip_permission_denied, ec), end;
         it != end; it.increment(ec)) {
        if (ec) {
            break;
        }
        if (it->is_regular_file(ec)) {
            files.push_back(it->path());
        }
    }
    std::sort(files.begin(), files.end());

    std::vector<std::string> problems;
    for (const auto& file : files) {
        std::string ext = file.extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        try {
            if (ext == ".csv") {
                add_table(file, config);
            } else if (ext == ".txt" || ext == ".md") {
                add_text(file);
            }
        } catch (const Error& e) {
            problems.push_back(file.string() + ": " + e.what());
        }
    }
    return problems;
}

ResourceRef ResourceRegistry::find(std::string_view base_iri) const {
    std::shared_lock lock(mutex_);
    const auto it = resources_.find(base_iri);
    if (it == resources_.end()) {
        throw Error(ErrorCode::UnknownResource, "unknown resource: " + std::string(base_iri));
    }
    return it->second;
}

std::shared_ptr<const TableResource> ResourceRegistry::find_table(std::string_view base_iri) const {
    const ResourceRef ref = find(base_iri);
    if (const auto* table = std::get_if<std::shared_ptr<const TableResource>>(&ref)) {
        return *table;
    }
    throw Error(ErrorCode::ResourceKindMismatch, std::string(base_iri) + " is not a table");
}

std::vector<ResourceRef> ResourceRegistry::all() const {
    std::shared_lock lock(mutex_);
    std::vector<ResourceRef> out;
    out.reserve(resources_.size());
    for (const auto& [iri, ref] : resources_) {
        out.push_back(ref);
    }
    return out;
}

const std::string& base_iri_of(const ResourceRef& ref) {
    return std::visit([](const auto& ptr) -> const std::string& { return ptr->base_iri(); }, ref);
}

}  // namespace datacat::resources
