#pragma once

#include <stdexcept>
#include <string>

namespace mli {

// Input that does not conform to the language: lexical, syntactic, or
// declaration-level (unknown symbol, arity mismatch, type clash).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line, int column)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Well-formed input that falls outside what the engine can analyze,
// e.g. a program that is not sigma-determinate, or an existential
// quantifier over an infinite domain.
class RejectionError : public std::runtime_error {
 public:
  explicit RejectionError(std::string message)
      : std::runtime_error(std::move(message)) {}
};

}  // namespace mli
