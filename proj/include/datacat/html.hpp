#pragma once

#include <string>
#include <string_view>

namespace datacat::html {

/// Escapes &, <, >, " and ' for use in element content and attribute values.
std::string escape(std::string_view text);

}  // namespace datacat::html
