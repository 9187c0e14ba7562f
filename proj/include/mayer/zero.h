#pragma once

#include <cstdint>
#include <optional>

#include "mayer/expr.h"

namespace mayer {

enum class ZeroVerdict { Zero, NonZero, ProbablyZero, ProbablyNonZero, Unknown };

const char* verdict_name(ZeroVerdict v);

inline constexpr int kZeroSamples = 20;
inline constexpr long double kZeroTolerance = 1e-9L;
inline constexpr long double kNonZeroThreshold = 1e-6L;
inline constexpr int kMaxResamples = 400;

/// Exact via the rational normal form when it decides, else by sampling.
ZeroVerdict is_zero(const Expr& e, std::uint64_t seed = 0);

inline bool zero_like(ZeroVerdict v) { return v == ZeroVerdict::Zero || v == ZeroVerdict::ProbablyZero; }

struct SampleResult {
  ZeroVerdict verdict = ZeroVerdict::Unknown;
  long double max_abs = 0;
  int trials = 0;
};

/// Sampling alone, reporting the largest magnitude seen.
SampleResult sample_zero(const Expr& e, std::uint64_t seed, int trials = kZeroSamples);

}  // namespace mayer
