#pragma once

#include <stdexcept>
#include <string>

namespace pbdr {

/// Raised when an argument violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the loaders; carries the 1-based data row and the column name
/// (either may be empty/zero when not applicable).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t row = 0, std::string column = {})
      : std::runtime_error(message), row_(row), column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

/// Raised by separator search when the input cannot define a separator
/// (for instance only one class present).
class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pbdr
