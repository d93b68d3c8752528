#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace schmidt {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition (bad bounds, unnormalized input, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A discretization failed its own convergence or resolution check.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// Malformed input file. Line and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t line, std::size_t column)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  static std::string format(const std::string &what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

} // namespace schmidt
