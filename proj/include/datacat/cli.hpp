#pragma once

#include <iosfwd>

namespace datacat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point for the `datacat` command: serve | profile | query | export | import.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace datacat::cli
