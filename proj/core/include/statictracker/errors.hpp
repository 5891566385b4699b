#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace statictracker {

// Base of every error the library throws. The CLI maps subclasses onto exit
// codes: input-shaped errors exit 2, validation-shaped errors exit 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed markup (XML or JSON). Line and column are 1-based; zero means the
// underlying parser did not report a position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed input that violates a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Pipeline inputs that do not fit together (e.g. a diff missing for a
// changed file).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Two refactoring records rewrite the same warning field to different values.
class ConflictError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace statictracker
