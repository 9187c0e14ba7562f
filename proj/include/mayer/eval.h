#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mayer/expr.h"

namespace mayer {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for log of a non-positive number, even root of a negative one,
/// and similar: the point lies outside the real domain.
class DomainError : public EvalError {
 public:
  using EvalError::EvalError;
};

/// Exact rational while possible, long double after the first
/// transcendental operation.
struct Value {
  bool exact = true;
  Rational q;
  long double f = 0;

  static Value of(const Rational& r) { return Value{true, r, 0}; }
  static Value of(long double x) { return Value{false, 0, x}; }
  long double as_float() const { return exact ? static_cast<long double>(q.get_d()) : f; }
  bool is_zero() const { return exact ? q == 0 : f == 0; }
};

/// Polynomial stand-in for an arbitrary function: sum of c * slots^alpha.
struct FnInstance {
  std::size_t arity = 0;
  std::vector<std::pair<Rational, std::vector<int>>> monomials;
};

struct Point {
  std::map<std::string, Rational> symbols;
  std::map<std::string, FnInstance> functions;
};

Value eval_at(const Expr& e, const Point& pt);

/// Seeded sampler for points. Symbols get positive rationals, arbitrary
/// functions get random polynomials of total degree <= 2.
class PointSampler {
 public:
  explicit PointSampler(std::uint64_t seed) : rng_(seed) {}
  Rational positive_rational();
  Rational signed_rational();
  FnInstance function(std::size_t arity);
  /// A fresh point covering every symbol and arbitrary function of `exprs`.
  Point cover(const std::vector<Expr>& exprs);

 private:
  std::mt19937_64 rng_;
};

}  // namespace mayer
