#pragma once

#include <cstdint>
#include <vector>

#include "mayer/pde.h"
#include "mayer/zero.h"

namespace mayer {

enum class Overall { Holds, HoldsNumerically, Fails };
const char* overall_name(Overall o);

struct VerifyReport {
  std::vector<ZeroVerdict> verdicts;  // one per equation
  std::vector<Expr> residuals;
  long double max_residual = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  Overall overall = Overall::Fails;
};

/// Each equation with the unknown replaced by `solution` and its
/// derivatives by those of `solution`, normalized.
std::vector<Expr> residual(const PdeSystem& sys, const Expr& solution);

VerifyReport solution_q(const PdeSystem& sys, const Expr& solution, int trials = kZeroSamples,
                        std::uint64_t seed = 0);

}  // namespace mayer
