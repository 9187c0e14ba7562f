#pragma once

#include <ostream>
#include <string>

#include "mayer/expr.h"

namespace mayer {

/// Prints in the input grammar; anything but slot derivatives re-parses.
std::string to_string(const Expr& e);
std::string to_latex(const Expr& e);

std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace mayer
