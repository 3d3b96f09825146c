#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "datacat/deeplink.hpp"
#include "datacat/resources.hpp"
#include "datacat/term.hpp"
#include "datacat/vocab.hpp"

namespace datacat::profiler {

inline constexpr std::size_t kDefaultHistogramCap = 1000;

struct HistogramEntry {
    std::string value;
    std::size_t frequency = 0;
    bool overflow = false;  // folds every value beyond the cap

    friend bool operator==(const HistogramEntry&, const HistogramEntry&) = default;
};

/// One entry per distinct value, most frequent first, ties by ascending
/// byte order. When there are more than `cap` distinct values the tail is
/// folded into a single trailing overflow entry.
std::vector<HistogramEntry> histogram(std::span<const std::string_view> values,
                                      std::size_t cap = kDefaultHistogramCap);

/// Descriptive statistics of value lengths in code points. Standard
/// deviation is the population form.
struct LengthStats {
    std::size_t min = 0;
    std::size_t max = 0;
    double mean = 0.0;
    double std_dev = 0.0;
};

struct ColumnProfile {
    deeplink::DeepLink column_link;
    std::size_t column_index = 0;
    std::optional<std::string> header_label;

    std::size_t total_count = 0;
    std::size_t distinct_count = 0;
    std::size_t blank_count = 0;
    std::size_t empty_count = 0;
    std::optional<LengthStats> lengths;  // absent for an empty column
    std::vector<HistogramEntry> histogram;
};

/// Statistics over raw values. The link fields are left empty.
ColumnProfile profile_values(std::span<const std::string_view> values, std::size_t cap = kDefaultHistogramCap);

/// Profiles one column's data values (row 1 is skipped when the table has a
/// header row). Throws Error(OutOfBounds).
ColumnProfile profile_column(const resources::TableResource& table, std::size_t col,
                             std::size_t cap = kDefaultHistogramCap);

std::vector<ColumnProfile> profile_table(const resources::TableResource& table,
                                         std::size_t cap = kDefaultHistogramCap);

/// Decimal lexical form with exactly six fractional digits.
std::string format_decimal(double value);

/// RDF statements for one profile; every non-histogram triple has the
/// column's deep link as subject. Histogram entries are blank nodes whose
/// labels are derived from the column IRI and value, so re-profiling an
/// unchanged table yields identical triples.
std::vector<graph::Triple> profile_to_triples(const ColumnProfile& profile, const vocab::Vocabulary& vocabulary);

}  // namespace datacat::profiler
