#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mayer/expr.h"

namespace mayer {

/// Equations F_i(x, z, p) = 0 for one unknown z of the variables x.
/// Derivative p_i is the symbol named derivative_symbol_name(unknown, x_i).
struct PdeSystem {
  std::vector<std::string> vars;
  std::string unknown;
  std::vector<std::string> params;
  std::vector<Expr> equations;

  std::size_t n() const { return vars.size(); }
  std::size_t m() const { return equations.size(); }
  std::string p_name(std::size_t i) const;
  Expr p(std::size_t i) const { return Expr::symbol(p_name(i)); }
  Expr z() const { return Expr::symbol(unknown); }
  std::set<std::string> p_names() const;
};

/// Builds a system: equations reduced to primitive numerators, identically
/// zero ones and rational multiples of earlier ones dropped (noted in
/// `trace` when given).
PdeSystem make_system(std::vector<std::string> vars, std::string unknown, std::vector<std::string> params,
                      const std::vector<Expr>& equations, std::vector<std::string>* trace = nullptr);

/// True when a is a nonzero rational multiple of b.
bool proportional(const Expr& a, const Expr& b);

struct DerivSolve {
  std::map<std::string, Expr> pivots;
  std::vector<std::string> free;
  std::vector<std::string> trace;
};

std::size_t jacobian_rank(const PdeSystem& sys, std::uint64_t seed = 0);

/// Sequential pivoting: an equation affine in an unsolved derivative is
/// solved for it (simplest coefficient first) and the value substituted
/// everywhere. When no equation is affine in any unsolved derivative, one
/// quadratic in a derivative is solved on the principal branch.
std::optional<DerivSolve> solve_for_derivatives(const PdeSystem& sys);

bool contains_derivative(const Expr& e, const PdeSystem& sys);

/// Replaces the unknown by `value` and each p_i by its x_i-derivative.
Expr substitute_solution(const Expr& eq, const PdeSystem& sys, const Expr& value);

}  // namespace mayer
