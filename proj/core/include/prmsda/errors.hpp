#pragma once

#include <stdexcept>
#include <string>

namespace prmsda {

/// Invalid or inconsistent basin / experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. The message carries the file location.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

  /// Same error with `prefix` (typically the file name) prepended.
  static ParseError in_file(const std::string& prefix, const ParseError& e) {
    return ParseError(prefix + ": " + e.what(), e.line(), Preformatted{});
  }

 private:
  struct Preformatted {};
  ParseError(const std::string& what, std::size_t line, Preformatted) : std::runtime_error(what), line_(line) {}

  std::size_t line_;
};

/// A simulation step produced a non-finite value or otherwise failed.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace prmsda
