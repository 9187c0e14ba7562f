#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "mayer/expr.h"

namespace mayer {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Name of the symbol standing for the partial derivative of `unknown`
/// with respect to `var`. It prints as d(f,x), which parses back.
std::string derivative_symbol_name(const std::string& unknown, const std::string& var);

/// Identifiers the parser may resolve. With `closed` set, any other
/// identifier is an error.
struct ParseContext {
  std::set<std::string> symbols;
  std::set<std::string> arbitrary_functions;
  std::optional<std::string> unknown;
  std::set<std::string> derivative_vars;
  bool closed = false;
  int line = 1;
  int column_offset = 0;
};

Expr parse_expr(const std::string& text, const ParseContext& ctx = {});

}  // namespace mayer
