#include "datacat/deeplink.hpp"

#include <algorithm>
#include <cctype>

#include "datacat/error.hpp"

namespace datacat::deeplink {

namespace {

[[noreturn]] void syntax_error(std::string_view text, const std::string& what) {
    throw Error(ErrorCode::SyntaxError, "invalid fragment '" + std::string(text) + "': " + what);
}

[[noreturn]] void bounds_error(const std::string& what) {
    throw Error(ErrorCode::BoundsError, what);
}

// A bound token as written: '*' or a decimal index (possibly zero, which the
// validator rejects).
struct Token {
    bool star = false;
    std::size_t value = 0;
};

class FragmentParser {
public:
    explicit FragmentParser(std::string_view text) : text_(text) {}

    Selector parse() {
        if (consume("row=")) {
            auto [start, end] = range();
            finish();
            return RowRange{start_index(start), end_bound(end)};
        }
        if (consume("col=")) {
            auto [start, end] = range();
            finish();
            return ColRange{start_index(start), end_bound(end)};
        }
        if (consume("line=")) {
            auto [start, end] = range();
            finish();
            return LineRange{start_index(start), end_bound(end)};
        }
        if (consume("cell=")) {
            const Token row = token();
            expect(',');
            const Token col = token();
            Token end_row = row;
            Token end_col = col;
            if (consume("-")) {
                end_row = token();
                expect(',');
                end_col = token();
            }
            finish();
            return CellRange{start_index(row), start_index(col), end_bound(end_row), end_bound(end_col)};
        }
        syntax_error(text_, "expected one of row=, col=, cell=, line=");
    }

private:
    std::pair<Token, Token> range() {
        const Token start = token();
        Token end = start;
        if (consume("-")) {
            end = token();
        }
        return {start, end};
    }

    Token token() {
        if (pos_ < text_.size() && text_[pos_] == '*') {
            ++pos_;
            return Token{true, 0};
        }
        const std::size_t begin = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
        if (pos_ == begin) {
            syntax_error(text_, "expected an index or '*' at offset " + std::to_string(begin));
        }
        const std::string_view digits = text_.substr(begin, pos_ - begin);
        if (digits.size() > 1 && digits.front() == '0') {
            syntax_error(text_, "leading zero in index");
        }
        if (digits.size() > 12) {
            bounds_error("index exceeds " + std::to_string(kMaxIndex));
        }
        std::size_t value = 0;
        for (const char d : digits) {
            value = value * 10 + static_cast<std::size_t>(d - '0');
        }
        return Token{false, value};
    }

    static std::size_t start_index(const Token& t) {
        if (t.star) {
            bounds_error("'*' is only allowed as an end bound");
        }
        if (t.value == 0) {
            bounds_error("indices are 1-based");
        }
        return t.value;
    }

    static EndBound end_bound(const Token& t) {
        if (t.star) {
            return EndBound::open();
        }
        if (t.value == 0) {
            bounds_error("indices are 1-based");
        }
        return EndBound::at(t.value);
    }

    bool consume(std::string_view lit) {
        if (text_.substr(pos_, lit.size()) == lit) {
            pos_ += lit.size();
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (pos_ >= text_.size() || text_[pos_] != c) {
            syntax_error(text_, std::string("expected '") + c + "' at offset " + std::to_string(pos_));
        }
        ++pos_;
    }

    void finish() {
        if (pos_ != text_.size()) {
            syntax_error(text_, "unexpected trailing input at offset " + std::to_string(pos_));
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void check_range(std::size_t start, EndBound end, const char* axis) {
    if (start == 0 || start > kMaxIndex) {
        bounds_error(std::string(axis) + " start out of range");
    }
    if (!end.is_open()) {
        if (end.value() > kMaxIndex) {
            bounds_error(std::string(axis) + " end out of range");
        }
        if (end.value() < start) {
            bounds_error(std::string(axis) + " range is inverted");
        }
    }
}

std::string range_text(std::size_t start, EndBound end) {
    std::string out = std::to_string(start);
    if (end.is_open()) {
        out += "-*";
    } else if (end.value() != start) {
        out += "-" + std::to_string(end.value());
    }
    return out;
}

std::string bound_text(EndBound end) {
    return end.is_open() ? std::string("*") : std::to_string(end.value());
}

struct Span {
    std::size_t first;
    std::size_t last;
};

Span clamp_axis(std::size_t start, EndBound end, std::size_t extent, const char* axis) {
    if (start > extent) {
        throw Error(ErrorCode::OutOfBounds, std::string(axis) + " " + std::to_string(start) +
                                                " is beyond the extent " + std::to_string(extent));
    }
    return Span{start, end.clamp(extent)};
}

}  // namespace

Selector parse_fragment(std::string_view text) {
    Selector sel = FragmentParser(text).parse();
    validate(sel);
    return sel;
}

void validate(const Selector& sel) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CellRange>) {
                check_range(s.start_row, s.end_row, "row");
                check_range(s.start_col, s.end_col, "column");
            } else if constexpr (std::is_same_v<T, RowRange>) {
                check_range(s.start, s.end, "row");
            } else if constexpr (std::is_same_v<T, ColRange>) {
                check_range(s.start, s.end, "column");
            } else {
                check_range(s.start, s.end, "line");
            }
        },
        sel);
}

std::string serialize(const Selector& sel) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CellRange>) {
                std::string out = "cell=" + std::to_string(s.start_row) + "," + std::to_string(s.start_col);
                if (s.end_row != EndBound::at(s.start_row) || s.end_col != EndBound::at(s.start_col)) {
                    out += "-" + bound_text(s.end_row) + "," + bound_text(s.end_col);
                }
                return out;
            } else if constexpr (std::is_same_v<T, RowRange>) {
                return "row=" + range_text(s.start, s.end);
            } else if constexpr (std::is_same_v<T, ColRange>) {
                return "col=" + range_text(s.start, s.end);
            } else {
                return "line=" + range_text(s.start, s.end);
            }
        },
        sel);
}

Selector single_cell(std::size_t row, std::size_t col) {
    return CellRange{row, col, EndBound::at(row), EndBound::at(col)};
}

CellPosition a1_to_cell(std::string_view label) {
    std::size_t pos = 0;
    std::size_t col = 0;
    while (pos < label.size() && std::isalpha(static_cast<unsigned char>(label[pos])) != 0) {
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(label[pos])));
        col = col * 26 + static_cast<std::size_t>(c - 'A' + 1);
        if (col > kMaxIndex) {
            throw Error(ErrorCode::SyntaxError, "column label too long: " + std::string(label));
        }
        ++pos;
    }
    const std::size_t digits_begin = pos;
    std::size_t row = 0;
    while (pos < label.size() && std::isdigit(static_cast<unsigned char>(label[pos])) != 0) {
        row = row * 10 + static_cast<std::size_t>(label[pos] - '0');
        if (row > kMaxIndex) {
            throw Error(ErrorCode::SyntaxError, "row number too large: " + std::string(label));
        }
        ++pos;
    }
    if (digits_begin == 0 || pos == digits_begin || pos != label.size() || label[digits_begin] == '0') {
        throw Error(ErrorCode::SyntaxError, "not an A1 cell label: '" + std::string(label) + "'");
    }
    return CellPosition{row, col};
}

std::string column_letters(std::size_t col) {
    std::string out;
    while (col > 0) {
        const std::size_t rem = (col - 1) % 26;
        out.push_back(static_cast<char>('A' + rem));
        col = (col - 1) / 26;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string DeepLink::to_string() const {
    if (!selector) {
        return base_iri;
    }
    return base_iri + "#" + serialize(*selector);
}

DeepLink DeepLink::parse(std::string_view iri) {
    const auto hash = iri.find('#');
    if (hash == std::string_view::npos) {
        return DeepLink{std::string(iri), std::nullopt};
    }
    DeepLink link{std::string(iri.substr(0, hash)), std::nullopt};
    const std::string_view fragment = iri.substr(hash + 1);
    if (!fragment.empty()) {
        link.selector = parse_fragment(fragment);
    }
    return link;
}

Bounds clamp_table(const Selector& sel, std::size_t rows, std::size_t cols) {
    return std::visit(
        [rows, cols](const auto& s) -> Bounds {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CellRange>) {
                const Span r = clamp_axis(s.start_row, s.end_row, rows, "row");
                const Span c = clamp_axis(s.start_col, s.end_col, cols, "column");
                return Bounds{r.first, r.last, c.first, c.last};
            } else if constexpr (std::is_same_v<T, RowRange>) {
                const Span r = clamp_axis(s.start, s.end, rows, "row");
                return Bounds{r.first, r.last, 1, cols};
            } else if constexpr (std::is_same_v<T, ColRange>) {
                const Span c = clamp_axis(s.start, s.end, cols, "column");
                return Bounds{1, rows, c.first, c.last};
            } else {
                throw Error(ErrorCode::SelectorKindMismatch, "line selector cannot address a table");
            }
        },
        sel);
}

Bounds clamp_text(const Selector& sel, std::size_t lines) {
    const auto* range = std::get_if<LineRange>(&sel);
    if (range == nullptr) {
        throw Error(ErrorCode::SelectorKindMismatch, "table selector cannot address a text resource");
    }
    const Span l = clamp_axis(range->start, range->end, lines, "line");
    return Bounds{l.first, l.last, 1, 1};
}

}  // namespace datacat::deeplink
