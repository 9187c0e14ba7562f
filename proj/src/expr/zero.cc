#include "mayer/zero.h"

#include <cmath>

#include "mayer/eval.h"
#include "mayer/rational_nf.h"

namespace mayer {

const char* verdict_name(ZeroVerdict v) {
  switch (v) {
    case ZeroVerdict::Zero:
      return "Zero";
    case ZeroVerdict::NonZero:
      return "NonZero";
    case ZeroVerdict::ProbablyZero:
      return "ProbablyZero";
    case ZeroVerdict::ProbablyNonZero:
      return "ProbablyNonZero";
    case ZeroVerdict::Unknown:
      return "Unknown";
  }
  return "?";
}

SampleResult sample_zero(const Expr& e, std::uint64_t seed, int trials) {
  SampleResult out;
  PointSampler sampler(seed);
  int attempts = 0;
  while (out.trials < trials && attempts < kMaxResamples) {
    ++attempts;
    Point pt = sampler.cover({e});
    Value v;
    try {
      v = eval_at(e, pt);
    } catch (const DivisionByZero&) {
      continue;
    } catch (const DomainError&) {
      continue;
    }
    long double mag = v.exact ? std::fabs(static_cast<long double>(v.q.get_d())) : std::fabs(v.f);
    if (!std::isfinite(mag)) continue;
    out.max_abs = std::max(out.max_abs, mag);
    ++out.trials;
  }
  if (out.trials < trials) {
    out.verdict = ZeroVerdict::Unknown;
  } else if (out.max_abs >= kNonZeroThreshold) {
    out.verdict = ZeroVerdict::ProbablyNonZero;
  } else if (out.max_abs < kZeroTolerance) {
    out.verdict = ZeroVerdict::ProbablyZero;
  } else {
    out.verdict = ZeroVerdict::Unknown;
  }
  return out;
}

ZeroVerdict is_zero(const Expr& e, std::uint64_t seed) {
  if (e.is_number()) return e.is_zero() ? ZeroVerdict::Zero : ZeroVerdict::NonZero;
  KernelTable t;
  t.scan(e);
  RationalNF f = t.convert(e);
  if (f.is_zero()) return ZeroVerdict::Zero;
  if (f.numerator.is_constant()) return ZeroVerdict::NonZero;
  bool generic = true;
  for (int i = 0; i < t.nvars(); ++i) {
    if (!t.variable_expr(i).is(Kind::Symbol) && !(t.variable_expr(i).is(Kind::Power) &&
                                                  t.variable_expr(i).base().is(Kind::Symbol))) {
      generic = false;
      break;
    }
  }
  if (generic) return ZeroVerdict::NonZero;
  return sample_zero(t.to_expr(f.numerator), seed).verdict;
}

}  // namespace mayer
