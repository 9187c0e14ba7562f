#pragma once

// Randomized property checks shared by the unit tests and the acceptance
// binary. Every check is seeded and deterministic.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mayer/expr.h"
#include "mayer/pde.h"

namespace mayer::props {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi);
  bool coin(double p = 0.5);
  Rational coeff();  // nonzero, small numerator and denominator
  Expr monomial(const std::vector<Expr>& atoms, int max_deg);
  Expr poly(const std::vector<Expr>& atoms, int max_terms, int max_deg);
  /// Tree over + * / and exp, sin, cos, log(1 + u^2), sqrt(1 + u^2).
  Expr smooth(const std::vector<Expr>& atoms, int depth);
  /// Integrand shaped like an entry of the antiderivative table.
  Expr table_integrand(const Expr& x, const std::vector<Expr>& params);

 private:
  std::mt19937_64 rng_;
};

struct Outcome {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string example;  // first counterexample

  bool ok() const { return failures == 0 && cases > 0; }
};

/// System context with variables x1..xn and unknown z.
PdeSystem context(std::size_t n);

Outcome bracket_antisymmetry(int cases, std::uint64_t seed);
Outcome bracket_self(int cases, std::uint64_t seed);
Outcome bracket_bilinear(int cases, std::uint64_t seed);
Outcome bracket_leibniz(int cases, std::uint64_t seed);
Outcome bracket_jacobi(int cases, std::uint64_t seed);

Outcome normalize_idempotent(int cases, std::uint64_t seed);
Outcome derivative_finite_difference(int cases, std::uint64_t seed, double tol = 1e-5);
/// Cases counts table hits only; `attempts` integrands are tried.
Outcome integrate_round_trip(int attempts, std::uint64_t seed);

/// Random homogeneous and inhomogeneous linear equations: every emitted
/// single solution must back-substitute to zero.
Outcome single_soundness(int cases, std::uint64_t seed);
/// Every corpus equation's single solution and every general solution with
/// nothing left unsolved must back-substitute to zero.
Outcome corpus_soundness(const std::string& corpus_dir);

}  // namespace mayer::props
