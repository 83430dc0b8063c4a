#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pencilflow {

enum class ErrorKind {
  invalid_input,  // empty or degenerate image, bad dimensions
  config,         // parameter outside its valid range
  io,             // unreadable input or unwritable output
  parse,          // malformed stroke log line
  version,        // stroke log schema mismatch
  corrupt_log,    // a log entry that cannot be rendered
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    case ErrorKind::parse: return "parse";
    case ErrorKind::version: return "version";
    case ErrorKind::corrupt_log: return "corrupt_log";
  }
  return "unknown";
}

// Every failure raised by the library is an Error. `location` carries a
// 1-based line number for log parse errors and a 0-based stroke index for
// corrupt log entries.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> location = std::nullopt)
      : std::runtime_error(message), kind_(kind), location_(location) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> location() const noexcept { return location_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> location_;
};

}  // namespace pencilflow
