#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mayer/expr.h"

namespace mayer {

/// Antiderivative from a small table: polynomials, powers of affine
/// arguments, exp/sin/cos/log of affine arguments, linearity. Every result
/// is checked by differentiation; absent rather than wrong.
std::optional<Expr> integrate_univariate(const Expr& e, const std::string& s);

/// Solves eq = 0 for `target` when it occurs through a single kernel that
/// is affine, a pure power or quadratic, possibly under exp/log/radicals.
/// Even roots take the principal branch; such choices are appended to
/// `notes` when given.
std::optional<Expr> isolate(const Expr& eq, const std::string& target,
                            std::vector<std::string>* notes = nullptr);

/// Gauss-Jordan elimination over the field generated by the kernels of
/// `eqs`. Absent when some equation is not affine in the targets, the system
/// is inconsistent, or a target is left undetermined.
std::optional<std::map<std::string, Expr>> solve_linear(const std::vector<Expr>& eqs,
                                                        const std::vector<std::string>& targets);

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RationalMatrix& m, std::size_t ncols);

/// Basis of {v : m v = 0}, one vector per free column (that entry set to 1).
std::vector<std::vector<Rational>> nullspace(RationalMatrix m, std::size_t ncols);

/// Rank by partial pivoting with tolerance 1e-9 relative to the largest entry.
std::size_t float_rank(std::vector<std::vector<long double>> m);

}  // namespace mayer
