#include "datacat/profiler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <unordered_map>

#include "datacat/utf8.hpp"

namespace datacat::profiler {

namespace {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 14695981039346656037ULL) {
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

std::string entry_label(const std::string& column_iri, const HistogramEntry& entry) {
    std::uint64_t h = fnv1a(column_iri);
    h = fnv1a(entry.overflow ? std::string_view("\x01", 1) : std::string_view("\x00", 1), h);
    h = fnv1a(entry.value, h);
    char buf[24];
    std::snprintf(buf, sizeof buf, "h%016llx", static_cast<unsigned long long>(h));
    return buf;
}

using CountMap = std::unordered_map<std::string_view, std::size_t>;

CountMap count_values(std::span<const std::string_view> values) {
    CountMap counts;
    for (const auto v : values) {
        ++counts[v];
    }
    return counts;
}

std::vector<HistogramEntry> histogram_from_counts(const CountMap& counts, std::size_t cap) {
    std::vector<std::pair<std::string_view, std::size_t>> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });

    std::vector<HistogramEntry> out;
    out.reserve(std::min(sorted.size(), cap) + 1);
    std::size_t folded = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i < cap) {
            out.push_back(HistogramEntry{std::string(sorted[i].first), sorted[i].second, false});
        } else {
            folded += sorted[i].second;
        }
    }
    if (sorted.size() > cap) {
        out.push_back(HistogramEntry{std::string(), folded, true});
    }
    return out;
}

}  // namespace

std::vector<HistogramEntry> histogram(std::span<const std::string_view> values, std::size_t cap) {
    return histogram_from_counts(count_values(values), cap);
}

ColumnProfile profile_values(std::span<const std::string_view> values, std::size_t cap) {
    ColumnProfile p;
    p.total_count = values.size();
    std::vector<std::size_t> lengths;
    lengths.reserve(values.size());
    for (const auto v : values) {
        if (v.empty()) {
            ++p.empty_count;
        } else if (utf8::is_blank(v)) {
            ++p.blank_count;
        }
        lengths.push_back(utf8::length(v));
    }
    const CountMap counts = count_values(values);
    p.distinct_count = counts.size();
    p.histogram = histogram_from_counts(counts, cap);

    if (!lengths.empty()) {
        LengthStats s;
        const auto [lo, hi] = std::minmax_element(lengths.begin(), lengths.end());
        s.min = *lo;
        s.max = *hi;
        double sum = 0.0;
        for (const auto len : lengths) {
            sum += static_cast<double>(len);
        }
        s.mean = sum / static_cast<double>(lengths.size());
        double sq = 0.0;
        for (const auto len : lengths) {
            const double d = static_cast<double>(len) - s.mean;
            sq += d * d;
        }
        s.std_dev = std::sqrt(sq / static_cast<double>(lengths.size()));
        p.lengths = s;
    }
    return p;
}

ColumnProfile profile_column(const resources::TableResource& table, std::size_t col, std::size_t cap) {
    const std::size_t first_row = table.header_row() ? 2 : 1;
    const auto values = table.column(col, first_row);
    ColumnProfile p = profile_values(values, cap);
    p.column_link = deeplink::DeepLink{table.base_iri(), deeplink::ColRange{col, deeplink::EndBound::at(col)}};
    p.column_index = col;
    if (table.header_row()) {
        p.header_label = table.cell(1, col);
    }
    return p;
}

std::vector<ColumnProfile> profile_table(const resources::TableResource& table, std::size_t cap) {
    std::vector<ColumnProfile> out;
    out.reserve(table.col_count());
    for (std::size_t c = 1; c <= table.col_count(); ++c) {
        out.push_back(profile_column(table, c, cap));
    }
    return out;
}

std::string format_decimal(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

std::vector<graph::Triple> profile_to_triples(const ColumnProfile& profile, const vocab::Vocabulary& vocabulary) {
    using graph::Term;
    const std::string column_iri = profile.column_link.to_string();
    const Term column = Term::iri(column_iri);
    const std::string decimal(graph::kXsdDecimal);
    auto integer = [](std::size_t v) { return Term::literal(std::to_string(v), std::string(graph::kXsdInteger)); };

    std::vector<graph::Triple> out;
    out.push_back({column, vocab::rdf_type(), vocabulary.column()});
    out.push_back({column, vocabulary.column_of(), Term::iri(profile.column_link.base_iri)});
    out.push_back({column, vocabulary.column_index(), integer(profile.column_index)});
    if (profile.header_label) {
        out.push_back({column, vocab::rdfs_label(), Term::literal(*profile.header_label)});
    }
    out.push_back({column, vocabulary.total_count(), integer(profile.total_count)});
    out.push_back({column, vocabulary.distinct_count(), integer(profile.distinct_count)});
    out.push_back({column, vocabulary.blank_count(), integer(profile.blank_count)});
    out.push_back({column, vocabulary.empty_count(), integer(profile.empty_count)});
    if (profile.lengths) {
        const auto& s = *profile.lengths;
        out.push_back({column, vocabulary.min_length(), integer(s.min)});
        out.push_back({column, vocabulary.avg_length(), Term::literal(format_decimal(s.mean), decimal)});
        out.push_back({column, vocabulary.std_dev_length(), Term::literal(format_decimal(s.std_dev), decimal)});
        out.push_back({column, vocabulary.max_length(), integer(s.max)});
    }
    for (const auto& entry : profile.histogram) {
        const Term node = Term::blank(entry_label(column_iri, entry));
        out.push_back({column, vocabulary.histogram_entry(), node});
        out.push_back({node, vocabulary.value(), entry.overflow ? vocabulary.other_values() : Term::literal(entry.value)});
        out.push_back({node, vocabulary.frequency(), integer(entry.frequency)});
    }
    return out;
}

}  // namespace datacat::profiler
