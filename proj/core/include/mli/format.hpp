#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace mli {

// Shortest decimal string that parses back to the same double. Keeps
// report output stable across runs and platforms with IEEE binary64.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace mli
