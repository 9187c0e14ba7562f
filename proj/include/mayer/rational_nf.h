#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mayer/expr.h"
#include "mayer/poly.h"

namespace mayer {

/// Reduced quotient of polynomials: gcd(numerator, denominator) = 1 and the
/// denominator is monic under the lexicographic term order.
struct RationalNF {
  Poly numerator;
  Poly denominator;

  static RationalNF constant(int nvars, const Rational& c);
  static RationalNF from_poly(Poly p);

  bool is_zero() const { return numerator.is_zero(); }
  RationalNF operator+(const RationalNF& o) const;
  RationalNF operator-(const RationalNF& o) const;
  RationalNF operator*(const RationalNF& o) const;
  RationalNF operator/(const RationalNF& o) const;
  RationalNF operator-() const;
  RationalNF pow(long e) const;
  friend bool operator==(const RationalNF& a, const RationalNF& b) {
    return a.numerator == b.numerator && a.denominator == b.denominator;
  }
};

/// Maps the non-rational parts of expressions ("kernels": symbols,
/// function applications, radicals, arbitrary functions) to polynomial
/// variables. Radicals of a common base share one variable b^(1/L).
///
/// Usage: scan() every expression, then convert(). Scanning after the
/// first conversion is an error.
class KernelTable {
 public:
  void scan(const Expr& e);
  RationalNF convert(const Expr& e);
  Expr to_expr(const RationalNF& f);
  Expr to_expr(const Poly& p);

  int nvars();
  /// Variable index of a kernel expression, or -1.
  int index_of(const Expr& kernel);
  /// Expression a polynomial variable stands for.
  Expr variable_expr(int index);
  /// True when every kernel is a plain symbol: the conversion is then an
  /// isomorphism onto Q(symbols).
  bool purely_rational();
  /// Variables whose kernel mentions any of the given symbols.
  std::vector<int> variables_mentioning(const std::set<std::string>& names);

 private:
  struct Radical {
    Expr base;
    long lcm = 1;
  };
  void freeze();
  Expr normalized_kernel(const Expr& e);
  const Expr& cached_normal(const Expr& e);

  bool frozen_ = false;
  std::vector<Expr> keep_;
  std::unordered_map<const Node*, Expr> normal_cache_;
  ExprSet kernels_;
  ExprMap<Radical> radicals_;
  std::vector<Expr> var_exprs_;
  std::vector<long> var_root_;  // L for radical variables, 1 otherwise
  ExprMap<int> index_;
};

/// Exact canonical form on the rational fragment (no function applications,
/// integer exponents only); absent elsewhere.
struct RationalForm {
  RationalNF nf;
  std::vector<std::string> variables;
};
std::optional<RationalForm> to_rational_nf(const Expr& e);

/// Cancels common factors over the kernel field and expands. Idempotent.
Expr normalize(const Expr& e);

/// Numerator of normalize(e), with rational content removed and leading
/// coefficient positive. Suitable for equations read as e = 0.
Expr equation_numerator(const Expr& e);

/// As equation_numerator, and also divides out every polynomial factor
/// that is free of the kernels selected by `keep`.
Expr strip_content(const Expr& e, const std::function<bool(const Expr&)>& keep);

/// Integer-coefficient primitive polynomial with positive leading term.
Poly primitive_integer(const Poly& p);

}  // namespace mayer
