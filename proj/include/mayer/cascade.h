#pragma once

#include <map>
#include <set>
#include <optional>
#include <string>
#include <vector>

#include "mayer/completion.h"
#include "mayer/options.h"
#include "mayer/pde.h"
#include "mayer/single.h"

namespace mayer {

/// One solve step: the level's unknown expressed through a new arbitrary
/// function of invariants, which become the next level's variables. The
/// last level may carry no rule when nothing more could be solved.
struct Level {
  PdeSystem sys;
  std::optional<Expr> rule;                 // value of sys.unknown
  std::string next_fn;                      // empty when the rule closes the cascade
  std::vector<Expr> invariants;             // in sys.vars
  std::vector<std::string> fresh;           // next level's variables
  std::map<std::string, Expr> inversion;    // old variable -> fresh and persisting ones
  std::vector<std::string> persisting;
};

struct Unsolved {
  std::size_t level;  // equation is stated in levels[level].sys
  Expr eq;
};

struct CascadeState {
  std::vector<Level> levels;
  std::vector<Unsolved> unsolved;
  std::vector<std::string> generated;  // C#, K# names in creation order
  std::vector<std::string> trace;
};

struct ArbitraryInfo {
  std::string name;
  std::size_t arity = 0;
};

struct GeneralSolution {
  Expr solution;
  std::vector<ArbitraryInfo> arbitrary;
  std::vector<Expr> unsolved;  // in the original variables where possible
  std::vector<std::string> trace;
};

CascadeState pdes_to_rules(const PdeSystem& sys, NameSupply& names, const SolveOptions& opts = {});
GeneralSolution rules_to_solution(const CascadeState& state, const PdeSystem& sys);
GeneralSolution solve_compatible(const PdeSystem& sys, const SolveOptions& opts = {});

enum class Status { Solved, PartiallySolved, Incompatible, Unsupported };
const char* status_name(Status s);

struct Outcome {
  Status status = Status::Unsupported;
  CompatReport compat;
  std::optional<GeneralSolution> solution;
  std::string reason;
  std::vector<std::string> trace;
};

/// Rank check, completion, then the cascade on the completed system.
Outcome solve_overdetermined(const PdeSystem& sys, const SolveOptions& opts = {});

/// Names used by a system, for fresh-name hygiene.
std::set<std::string> reserved_names(const PdeSystem& sys);

}  // namespace mayer
