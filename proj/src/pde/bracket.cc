#include "mayer/bracket.h"

#include "mayer/rational_nf.h"

namespace mayer {

Expr total_derivative(const Expr& f, std::size_t k, const PdeSystem& sys) {
  return differentiate(f, sys.vars.at(k)) + sys.p(k) * differentiate(f, sys.unknown);
}

Expr jacobi_mayer(const Expr& f, const Expr& g, const PdeSystem& sys) {
  std::vector<Expr> terms;
  for (std::size_t k = 0; k < sys.n(); ++k) {
    std::string pk = sys.p_name(k);
    Expr dg = differentiate(g, pk);
    Expr df = differentiate(f, pk);
    if (!dg.is_zero()) terms.push_back(total_derivative(f, k, sys) * dg);
    if (!df.is_zero()) terms.push_back(-(total_derivative(g, k, sys) * df));
  }
  return add(std::move(terms));
}

std::optional<std::vector<BracketValue>> restricted_brackets(const PdeSystem& sys, DerivSolve* solved) {
  auto ds = solve_for_derivatives(sys);
  if (!ds) return std::nullopt;
  Bindings pivots(ds->pivots.begin(), ds->pivots.end());
  std::vector<BracketValue> out;
  for (std::size_t i = 0; i < sys.m(); ++i) {
    for (std::size_t j = i + 1; j < sys.m(); ++j) {
      Expr raw = jacobi_mayer(sys.equations[i], sys.equations[j], sys);
      out.push_back(BracketValue{i, j, raw, normalize(substitute(raw, pivots))});
    }
  }
  if (solved) *solved = std::move(*ds);
  return out;
}

}  // namespace mayer
