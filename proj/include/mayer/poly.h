#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mayer/expr.h"

namespace mayer {

using Exponents = std::vector<int>;

struct Term {
  Exponents exps;
  Rational coeff;
};

/// Sparse multivariate polynomial over Q in a fixed number of variables.
/// Terms are kept sorted by descending lexicographic exponent order with no
/// zero coefficients.
class Poly {
 public:
  explicit Poly(int nvars = 0) : nvars_(nvars) {}
  static Poly constant(int nvars, const Rational& c);
  static Poly variable(int nvars, int index, int power = 1);
  static Poly from_terms(int nvars, std::vector<Term> terms);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  bool is_monomial() const { return terms_.size() == 1; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  /// Degree in one variable, -1 for the zero polynomial.
  int degree(int var) const;
  int total_degree() const;
  bool uses(int var) const;
  std::vector<bool> used_vars() const;

  /// Coefficients with respect to `var`, indexed by degree.
  std::vector<Poly> coefficients(int var) const;
  Poly leading_coefficient(int var) const;
  const Rational& leading_numeric() const { return terms_.front().coeff; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(const Rational& c) const;
  Poly pow(unsigned e) const;
  Poly monic() const;
  /// Multiplies by var^k.
  Poly shifted(int var, int k) const;

  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

 private:
  void combine_sorted_unsorted(std::vector<Term>& raw);
  int nvars_;
  std::vector<Term> terms_;
};

std::optional<Poly> divide_exact(const Poly& a, const Poly& b);

/// Monic greatest common divisor (leading lexicographic coefficient 1).
Poly gcd(const Poly& a, const Poly& b);

/// Monic gcd of the coefficients of `p` viewed as a polynomial in `var`.
Poly content(const Poly& p, int var);

/// Gcd of the coefficients of `p` viewed as a polynomial in the `main`
/// variables; the result is free of every variable in `main`.
Poly content_over(const Poly& p, const std::vector<int>& main);

std::string to_debug_string(const Poly& p);

}  // namespace mayer
