#pragma once

#include <stdexcept>
#include <string>

namespace germforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different variable sets, fields or truncations.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// An operation was asked to leave its domain, e.g. substituting a unit
/// into a power series.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A request is well-formed but not covered by an effective procedure.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Internal invariant broken; indicates a bug, never bad input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    return "line " + std::to_string(line) + ", column " +
           std::to_string(column) + ": " + what;
  }
  int line_;
  int column_;
};

}  // namespace germforge
