#pragma once

#include <stdexcept>
#include <string>

namespace cubical {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of a de Morgan operation live in algebras of different arity.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// A construction would need cells above the configured dimension cap.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// An explicit cell or search budget was exhausted. Distinct from "no solution".
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed inputs: domain/codomain mismatch, non-commuting square, etc.
class ContractError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line ? what + " at " + std::to_string(line) + ":" + std::to_string(column) : what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace cubical
