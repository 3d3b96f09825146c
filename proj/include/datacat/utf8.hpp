#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace datacat::utf8 {

/// Byte offset of the first invalid sequence, or nullopt when `text` is
/// well-formed UTF-8 (no overlongs, no surrogates, max U+10FFFF).
std::optional<std::size_t> find_invalid(std::string_view text) noexcept;

inline bool is_valid(std::string_view text) noexcept { return !find_invalid(text).has_value(); }

/// Number of code points. Assumes valid input.
std::size_t length(std::string_view text) noexcept;

/// Decodes the code point starting at `pos` and advances `pos`. Assumes valid input.
char32_t decode(std::string_view text, std::size_t& pos) noexcept;

void append(std::string& out, char32_t cp);

/// Unicode White_Space property.
bool is_space(char32_t cp) noexcept;

/// True for a non-empty string made only of White_Space code points.
bool is_blank(std::string_view text) noexcept;

}  // namespace datacat::utf8
