#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace banglapredict {

/// Malformed corpus input (bad UTF-8, unreadable stream).
class IngestionError : public std::runtime_error {
 public:
  IngestionError(const std::string& what, std::size_t byte_offset)
      : std::runtime_error(what), byte_offset_(byte_offset) {}
  explicit IngestionError(const std::string& what)
      : std::runtime_error(what), byte_offset_(kNoOffset) {}

  static constexpr std::size_t kNoOffset = static_cast<std::size_t>(-1);
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Query against a table that cannot answer it (n-gram longer than max order).
class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Count-file or config-file parse failure. line() is 1-based, 0 if unknown.
class LoadError : public std::runtime_error {
 public:
  LoadError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NoModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace banglapredict
