#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mayer/parse.h"
#include "mayer/pde.h"

namespace mayer {

/// One system read from the line-oriented input format.
struct Problem {
  PdeSystem system;
  std::vector<Expr> raw_equations;     // as written, lhs - rhs
  std::optional<Expr> solution;        // `solution` directive, if any
  std::vector<std::string> trace;
};

/// Throws ParseError with the offending line and column.
Problem parse_problem(const std::string& text);

}  // namespace mayer
