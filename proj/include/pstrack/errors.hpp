#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pstrack {

/// Root of every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Division by zero, sqrt of a negative number and similar.
class domain_error : public error {
 public:
  using error::error;
};

class dimension_error : public error {
 public:
  using error::error;
};

/// A matrix that is exactly singular, or singular to working precision when
/// the caller asked for a solve.
class singular_matrix : public error {
 public:
  using error::error;
};

class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t line, std::size_t column)
      : error(what + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace pstrack
