#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace intraday {

/// Error categories; the CLI maps them onto its exit codes.
enum class ErrorKind { usage, data, numeric };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Invalid configuration or arguments (bad session layout, bad flags).
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

/// Input data that cannot be used (malformed rows, empty panels, date mismatch).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

/// A row of the tick CSV that failed to parse. `line()` is 1-based.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Numerically undefined results: zero dispersion, degenerate cross-sections,
/// eigen-solver non-convergence.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

}  // namespace intraday
