#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mayer/cascade.h"
#include "mayer/verify.h"

namespace mayer {

enum class Format { Text, Json, Latex };

struct RunConfig {
  std::string input;
  Format format = Format::Text;
  bool verify = true;
  std::optional<int> max_rounds;
  int degree = 4;
  std::uint64_t seed = 0;
  long timeout_ms = 30000;
};

struct ArbitraryEntry {
  std::string name;
  std::size_t arity = 0;
};

/// Everything printed for one system.
struct Report {
  std::string status = "unsupported";
  int exit_code = 3;
  std::string unknown;
  std::vector<std::string> vars;
  std::optional<Expr> solution;
  std::vector<ArbitraryEntry> arbitrary;
  std::vector<Expr> unsolved;
  std::vector<Expr> added;
  int rounds = 0;
  bool probabilistic = false;
  std::optional<Expr> witness;
  std::string reason;
  bool checked_given = false;  // input carried its own `solution`
  std::optional<VerifyReport> verification;
  std::vector<std::string> trace;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and solves (or checks) one system. Throws InputError when the
/// text does not describe a system.
Report run_text(const std::string& text, const RunConfig& cfg);
Report run_file(const std::string& path, const RunConfig& cfg);

std::string format_text(const Report& r);
std::string format_json(const Report& r);
std::string format_latex(const Report& r);
std::string format_report(const Report& r, Format f);

}  // namespace mayer
