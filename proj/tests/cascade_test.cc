#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mayer/cascade.h"
#include "mayer/input.h"
#include "mayer/parse.h"
#include "mayer/print.h"
#include "mayer/rational_nf.h"
#include "mayer/verify.h"
#include "mayer/zero.h"

using namespace mayer;

namespace {

PdeSystem sys(const std::string& text) { return parse_problem(text).system; }

PdeSystem corpus(const std::string& name) {
  std::ifstream in(std::string(MAYER_CORPUS) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return sys(ss.str());
}

struct Expected {
  const char* file;
  Status status;
  int unsolved;  // -1: not checked
};

const Expected kCorpus[] = {
    {"invariants_six.pde", Status::Solved, 0},
    {"invariants_weighted.pde", Status::Solved, 0},
    {"invariants_twelve.pde", Status::Solved, 0},
    {"linear_pair.pde", Status::Solved, 0},
    {"characteristic_triple.pde", Status::Solved, 0},
    {"exact_trig.pde", Status::Solved, 0},
    {"obstruction.pde", Status::Incompatible, -1},
    {"needs_completion.pde", Status::Solved, 0},
    {"weighted_triple.pde", Status::Solved, 0},
    {"polynomial_pair.pde", Status::Solved, 0},
    {"product_pair.pde", Status::PartiallySolved, 2},
    {"exponential_pair.pde", Status::Solved, 0},
    {"homogeneous_triple.pde", Status::Solved, 0},
    {"inhomogeneous_triple.pde", Status::Solved, 0},
    {"rotation_pair.pde", Status::PartiallySolved, -1},
};

}  // namespace

TEST_CASE("corpus outcomes") {
  for (const auto& e : kCorpus) {
    CAPTURE(e.file);
    PdeSystem s = corpus(e.file);
    Outcome o = solve_overdetermined(s);
    CHECK(o.status == e.status);
    if (e.status == Status::Incompatible) {
      CHECK(o.compat.witness);
      CHECK_FALSE(o.solution);
      continue;
    }
    REQUIRE(o.solution);
    if (e.unsolved >= 0) CHECK(o.solution->unsolved.size() == static_cast<std::size_t>(e.unsolved));
    if (e.status != Status::Solved) continue;
    // one arbitrary function whose arity is the number of surviving
    // degrees of freedom
    REQUIRE(o.solution->arbitrary.size() == 1);
    CHECK(o.solution->arbitrary[0].arity == s.n() - o.compat.completed.m());
    CHECK(solution_q(s, o.solution->solution).overall != Overall::Fails);
  }
}

TEST_CASE("cascade shape") {
  for (const char* name : {"invariants_six.pde", "linear_pair.pde", "characteristic_triple.pde",
                           "polynomial_pair.pde", "weighted_triple.pde", "homogeneous_triple.pde"}) {
    CAPTURE(name);
    PdeSystem s = corpus(name);
    NameSupply names(reserved_names(s));
    CascadeState st = pdes_to_rules(s, names);
    CHECK(st.levels.size() <= s.m());
    for (std::size_t i = 1; i < st.levels.size(); ++i) {
      CHECK(st.levels[i].sys.n() < st.levels[i - 1].sys.n());
      CHECK(st.levels[i].sys.m() < st.levels[i - 1].sys.m());
    }
    // every generated name is new
    std::set<std::string> reserved = reserved_names(s);
    std::set<std::string> seen;
    for (const auto& g : st.generated) {
      CHECK_FALSE(reserved.count(g));
      CHECK(seen.insert(g).second);
    }
    for (const Level& l : st.levels) {
      for (const auto& f : l.fresh) CHECK_FALSE(reserved.count(f));
    }
  }
}

TEST_CASE("fresh names avoid clashes with the input") {
  PdeSystem s = sys("vars C1, u1\nunknown K1\neq d(K1,C1) + d(K1,u1) = 0\n");
  Outcome o = solve_overdetermined(s);
  REQUIRE(o.status == Status::Solved);
  for (const auto& a : o.solution->arbitrary) {
    CHECK(a.name != "C1");
    CHECK(a.name != "K1");
  }
  CHECK(solution_q(s, o.solution->solution).overall == Overall::Holds);
}

TEST_CASE("integrable pair") {
  PdeSystem s = sys("vars x, y\nunknown z\neq d(z,x) = 2*x\neq d(z,y) = 3*y^2\n");
  Outcome o = solve_overdetermined(s);
  REQUIRE(o.status == Status::Solved);
  REQUIRE(o.solution->arbitrary.size() == 1);
  CHECK(o.solution->arbitrary[0].arity == 0);
  Expr k = arbitrary(o.solution->arbitrary[0].name, {});
  CHECK(normalize(o.solution->solution - k - parse_expr("x^2 + y^3")).is_zero());
}

TEST_CASE("degenerate inputs") {
  PdeSystem empty = make_system({"x", "y"}, "z", {}, {});
  Outcome o = solve_overdetermined(empty);
  CHECK(o.status == Status::Unsupported);
  CHECK(o.reason == "empty system");

  PdeSystem dep = sys("vars x, y, t\nunknown z\neq d(z,x) + d(z,y)\neq d(z,x)*d(z,x) + 2*d(z,x)*d(z,y) + d(z,y)^2\n");
  Outcome o2 = solve_overdetermined(dep);
  CHECK(o2.status == Status::Unsupported);
  CHECK(o2.reason.rfind("rank-deficient", 0) == 0);
}

TEST_CASE("status names") {
  CHECK(std::string(status_name(Status::Solved)) == "solved");
  CHECK(std::string(status_name(Status::PartiallySolved)) == "partially_solved");
  CHECK(std::string(status_name(Status::Incompatible)) == "incompatible");
  CHECK(std::string(status_name(Status::Unsupported)) == "unsupported");
}
