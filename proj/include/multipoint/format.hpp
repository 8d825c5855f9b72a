#pragma once

#include <array>
#include <charconv>
#include <cstdio>
#include <string>

namespace multipoint {

/// Shortest decimal that parses back to exactly `x`.
inline std::string format_roundtrip(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

/// Fixed 17 significant digits, for human tables.
inline std::string format_sig17(double x) {
  std::array<char, 64> buf{};
  const int len = std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return std::string(buf.data(), static_cast<std::size_t>(len));
}

}  // namespace multipoint
