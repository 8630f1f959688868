#pragma once

#include <stdexcept>
#include <string>

namespace vecagg {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The caller violated an operation's contract: mismatched fields, bad
/// shapes, division by zero, degenerate problem instances.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (problem files, scheme files, wire frames).
/// Carries the 1-based line or the byte offset where parsing failed,
/// -1 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line = -1, long offset = -1)
      : Error(locate(what, line, offset)), line_(line), offset_(offset) {}

  long line() const { return line_; }
  long offset() const { return offset_; }

 private:
  static std::string locate(const std::string& what, long line, long offset) {
    if (line >= 0) return "line " + std::to_string(line) + ": " + what;
    if (offset >= 0) return "offset " + std::to_string(offset) + ": " + what;
    return what;
  }
  long line_;
  long offset_;
};

/// An enumeration request exceeds the configured state budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A constructor's built-in verification rejected the produced scheme.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed; indicates a bug, not caller error.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace vecagg
