#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "mli/format.hpp"

namespace mli {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Line-oriented key = value output with [section] markers. Nothing here
// depends on locale, time, or environment, so equal inputs give equal
// bytes.
class ReportWriter {
 public:
  void section(std::string_view name) {
    if (!out_.empty()) out_ += '\n';
    out_ += '[';
    out_ += name;
    out_ += "]\n";
  }

  void kv(std::string_view key, std::string_view value) {
    out_ += key;
    out_ += " = ";
    out_ += value;
    out_ += '\n';
  }
  void kv(std::string_view key, const char* value) {
    kv(key, std::string_view(value));
  }
  void kv(std::string_view key, const std::string& value) {
    kv(key, std::string_view(value));
  }
  void kv(std::string_view key, double value) { kv(key, format_double(value)); }
  void kv(std::string_view key, bool value) {
    kv(key, value ? std::string_view("true") : std::string_view("false"));
  }
  void kv(std::string_view key, std::uint64_t value) {
    kv(key, std::to_string(value));
  }
  void kv(std::string_view key, int value) { kv(key, std::to_string(value)); }

  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

}  // namespace mli
