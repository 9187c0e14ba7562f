#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mayer/options.h"
#include "mayer/pde.h"

namespace mayer {

enum class BracketClass { Zero, ObstructionXZ, NewEquation, Undecided };

/// `probabilistic` is set when the decision rested on sampling.
BracketClass classify_bracket(const Expr& b, const PdeSystem& sys, std::uint64_t seed = 0,
                              bool* probabilistic = nullptr);

enum class Compat { Compatible, Incompatible, Unsupported };
const char* compat_name(Compat c);

struct CompatReport {
  Compat verdict = Compat::Unsupported;
  PdeSystem completed;
  std::vector<Expr> added;
  int rounds = 0;
  bool probabilistic = false;
  std::optional<Expr> witness;  // obstruction bracket when incompatible
  std::string reason;
  std::vector<std::string> trace;
};

CompatReport complete(const PdeSystem& sys, const SolveOptions& opts = {});

}  // namespace mayer
