#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace datacat::deeplink {

/// Upper end of a range: either a concrete 1-based index or "through last" ('*').
class EndBound {
public:
    static constexpr EndBound open() noexcept { return EndBound{0}; }
    static constexpr EndBound at(std::size_t index) noexcept { return EndBound{index}; }

    constexpr bool is_open() const noexcept { return value_ == 0; }
    constexpr std::size_t value() const noexcept { return value_; }

    /// Concrete end given the extent of the addressed axis.
    constexpr std::size_t clamp(std::size_t extent) const noexcept {
        return is_open() || value_ > extent ? extent : value_;
    }

    friend constexpr bool operator==(EndBound, EndBound) = default;

private:
    constexpr explicit EndBound(std::size_t v) noexcept : value_(v) {}
    std::size_t value_;  // 0 encodes '*'
};

struct RowRange {
    std::size_t start;
    EndBound end;
    friend bool operator==(const RowRange&, const RowRange&) = default;
};

struct ColRange {
    std::size_t start;
    EndBound end;
    friend bool operator==(const ColRange&, const ColRange&) = default;
};

struct CellRange {
    std::size_t start_row;
    std::size_t start_col;
    EndBound end_row;
    EndBound end_col;
    friend bool operator==(const CellRange&, const CellRange&) = default;
};

/// Line range into a text resource; mirrors the row grammar.
struct LineRange {
    std::size_t start;
    EndBound end;
    friend bool operator==(const LineRange&, const LineRange&) = default;
};

using Selector = std::variant<RowRange, ColRange, CellRange, LineRange>;

/// Largest index accepted by the parser.
inline constexpr std::size_t kMaxIndex = 999'999'999'999ULL;

inline bool targets_table(const Selector& sel) noexcept {
    return !std::holds_alternative<LineRange>(sel);
}

/// Parses one selection ("row=2-4", "cell=1,8", "line=3-*"). Throws
/// Error(SyntaxError) for token-level problems and Error(BoundsError) for
/// zero indices, inverted ranges, and '*' in a start position.
Selector parse_fragment(std::string_view text);

/// Canonical fragment text; single-row/line/cell selections omit "-end".
std::string serialize(const Selector& sel);

/// Throws Error(BoundsError) unless `sel` satisfies the selector invariants.
void validate(const Selector& sel);

Selector single_cell(std::size_t row, std::size_t col);

struct CellPosition {
    std::size_t row;
    std::size_t col;
    friend bool operator==(const CellPosition&, const CellPosition&) = default;
};

/// Spreadsheet label ("H1", "AA10") to 1-based coordinates. Letters are
/// case-insensitive. Throws Error(SyntaxError).
CellPosition a1_to_cell(std::string_view label);

/// Column letters for a 1-based column index (8 -> "H", 27 -> "AA").
std::string column_letters(std::size_t col);

/// A base IRI optionally refined by a selector.
struct DeepLink {
    std::string base_iri;
    std::optional<Selector> selector;

    std::string to_string() const;

    /// Splits at the first '#'. An empty fragment is treated as no selector.
    static DeepLink parse(std::string_view iri);

    friend bool operator==(const DeepLink&, const DeepLink&) = default;
};

/// Concrete, inclusive, 1-based bounds. Text regions use rows for lines and
/// a single column. An empty text resource has last_row = 0.
struct Bounds {
    std::size_t first_row = 1;
    std::size_t last_row = 0;
    std::size_t first_col = 1;
    std::size_t last_col = 0;

    bool contains(const Bounds& other) const noexcept {
        return first_row <= other.first_row && other.last_row <= last_row &&
               first_col <= other.first_col && other.last_col <= last_col;
    }
    std::size_t row_count() const noexcept { return last_row >= first_row ? last_row - first_row + 1 : 0; }
    std::size_t col_count() const noexcept { return last_col >= first_col ? last_col - first_col + 1 : 0; }

    friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Clamps a table selector against a rows x cols grid. Ends beyond the extent
/// are clamped; a start beyond the extent throws Error(OutOfBounds).
Bounds clamp_table(const Selector& sel, std::size_t rows, std::size_t cols);

/// Clamps a line selector against a text of `lines` lines.
Bounds clamp_text(const Selector& sel, std::size_t lines);

}  // namespace datacat::deeplink
