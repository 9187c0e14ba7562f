#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mayer/options.h"
#include "mayer/pde.h"

namespace mayer {

/// Characteristic field sum_i a_i d/dv_i.
struct VectorField {
  std::vector<std::string> vars;
  std::vector<Expr> coeffs;

  Expr apply(const Expr& phi) const;
};

/// Up to `needed` functionally independent invariants of V, each certified
/// by a zero test of V(phi). Rungs: zero coefficients, scaling lattices,
/// bilinear pairs over invariant coefficients, two-variable reductions,
/// polynomial ansatz.
std::vector<Expr> first_integrals(const VectorField& v, std::size_t needed, const SolveOptions& opts = {},
                                  std::vector<std::string>* trace = nullptr);

/// Rank of the gradients of `fns` in `vars` at sampled points.
std::size_t gradient_rank(const std::vector<Expr>& fns, const std::vector<std::string>& vars,
                          std::uint64_t seed = 0);

struct SingleSolution {
  Expr expression;               // explicit value of the unknown
  std::vector<Expr> invariants;  // arguments of the new function
  std::string new_fn;            // name of the generated arbitrary function
  std::vector<std::string> notes;
};

/// Generates names that avoid the input's symbols.
class NameSupply {
 public:
  explicit NameSupply(std::set<std::string> taken = {}) : taken_(std::move(taken)) {}
  std::string fresh(const std::string& stem);
  /// Next name in the C1, C2, ... sequence shared by functions and constants.
  std::string function();
  std::string constant();
  void reserve(const std::string& name) { taken_.insert(name); }

 private:
  std::set<std::string> taken_;
  std::map<std::string, int> next_;
  int fn_counter_ = 0;
  int const_counter_ = 0;
};

/// Solves one first-order equation for sys.unknown; absent when no rung of
/// the method applies. Output is back-substituted before it is returned.
std::optional<SingleSolution> solve_single_pde(const Expr& eq, const PdeSystem& sys, NameSupply& names,
                                               const SolveOptions& opts = {});

/// Integrates dz = sum g_i dx_i for pivots g_i free of z and p; the new
/// constant is an arbitrary function of no arguments named by `names`.
std::optional<Expr> integrate_exact_form(const std::map<std::string, Expr>& pivots, const PdeSystem& sys,
                                         NameSupply& names, const SolveOptions& opts = {});

}  // namespace mayer
