#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

#include "plurality/errors.hpp"

namespace plurality {

// 17 significant digits: lossless for IEEE doubles, and locale independent.
inline std::string format_double(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParameterError("'" + std::string(text) + "' is not a number");
  }
  return value;
}

}  // namespace plurality
