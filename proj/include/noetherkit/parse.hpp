#pragma once

#include <string>
#include <string_view>

#include "noetherkit/expr.hpp"

namespace noetherkit {

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(message + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses the text grammar: + - * / ^, unary minus, parentheses, decimal or
/// integer literals (kept exact), the functions exp log sin cos sinh cosh
/// atan atan2 sqrt, and the identifiers x u du ddu f g df dg ddf ddg A b pi i.
/// Primes are accepted as aliases: u' = du, u'' = ddu, and likewise for f, g.
/// Exponents must reduce to rational constants.
Expr parse(std::string_view text);

}  // namespace noetherkit
