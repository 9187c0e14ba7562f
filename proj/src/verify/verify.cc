#include "mayer/verify.h"

#include <cmath>

#include "mayer/eval.h"
#include "mayer/rational_nf.h"

namespace mayer {

const char* overall_name(Overall o) {
  switch (o) {
    case Overall::Holds:
      return "Holds";
    case Overall::HoldsNumerically:
      return "HoldsNumerically";
    case Overall::Fails:
      return "Fails";
  }
  return "?";
}

std::vector<Expr> residual(const PdeSystem& sys, const Expr& solution) {
  std::vector<Expr> out;
  for (const Expr& eq : sys.equations) out.push_back(normalize(substitute_solution(eq, sys, solution)));
  return out;
}

VerifyReport solution_q(const PdeSystem& sys, const Expr& solution, int trials, std::uint64_t seed) {
  VerifyReport rep;
  rep.seed = seed;
  std::vector<Expr> raw;
  for (const Expr& eq : sys.equations) raw.push_back(substitute_solution(eq, sys, solution));
  bool all_exact = true, nonzero = false;
  for (const Expr& r : raw) {
    Expr n = normalize(r);
    rep.residuals.push_back(n);
    ZeroVerdict v = is_zero(n, seed);
    rep.verdicts.push_back(v);
    if (v != ZeroVerdict::Zero) all_exact = false;
    if (v == ZeroVerdict::NonZero || v == ZeroVerdict::ProbablyNonZero) nonzero = true;
  }
  if (all_exact) {
    rep.overall = Overall::Holds;
    return rep;
  }
  // Numeric certificate over the raw residuals.
  PointSampler sampler(seed);
  int attempts = 0;
  while (rep.trials < trials && attempts < kMaxResamples) {
    ++attempts;
    Point pt = sampler.cover(raw);
    long double worst = 0;
    try {
      for (const Expr& r : raw) {
        Value v = eval_at(r, pt);
        long double mag = std::fabs(v.as_float());
        if (!std::isfinite(mag)) throw DomainError("non-finite residual");
        worst = std::max(worst, mag);
      }
    } catch (const EvalError&) {
      continue;
    } catch (const DivisionByZero&) {
      continue;
    }
    rep.max_residual = std::max(rep.max_residual, worst);
    ++rep.trials;
  }
  if (nonzero || rep.trials < trials || rep.max_residual >= kZeroTolerance) {
    rep.overall = Overall::Fails;
  } else {
    rep.overall = Overall::HoldsNumerically;
  }
  return rep;
}

}  // namespace mayer
