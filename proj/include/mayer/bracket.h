#pragma once

#include <optional>
#include <vector>

#include "mayer/pde.h"

namespace mayer {

/// D_k F = dF/dx_k + p_k dF/dz.
Expr total_derivative(const Expr& f, std::size_t k, const PdeSystem& sys);

/// [F, G] = sum_k D_k F * dG/dp_k - D_k G * dF/dp_k.
Expr jacobi_mayer(const Expr& f, const Expr& g, const PdeSystem& sys);

struct BracketValue {
  std::size_t i = 0, j = 0;
  Expr raw;
  Expr restricted;
};

/// All pairwise brackets of the system, then restricted by substituting the
/// solved derivatives. Absent when the derivatives cannot be solved for.
std::optional<std::vector<BracketValue>> restricted_brackets(const PdeSystem& sys,
                                                             DerivSolve* solved = nullptr);

}  // namespace mayer
