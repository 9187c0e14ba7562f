#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace mayer {

class Timeout : public std::runtime_error {
 public:
  Timeout() : std::runtime_error("time limit exceeded") {}
};

/// Knobs shared by the solver stages. Passed by reference; never global.
struct SolveOptions {
  std::uint64_t seed = 0;
  int degree = 4;                 // H5 polynomial ansatz bound
  std::optional<int> max_rounds;  // completion rounds, default n
  std::optional<std::chrono::steady_clock::time_point> deadline;

  void check_deadline() const {
    if (deadline && std::chrono::steady_clock::now() > *deadline) throw Timeout();
  }
};

}  // namespace mayer
