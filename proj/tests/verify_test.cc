#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mayer/input.h"
#include "mayer/parse.h"
#include "mayer/print.h"
#include "mayer/verify.h"

using namespace mayer;

namespace {

Problem problem(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

std::vector<std::string> solution_fixtures() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(std::string(MAYER_CORPUS) + "/solutions")) {
    if (e.path().extension() == ".pde") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Applies `f` to the outermost arbitrary-function application.
Expr wrap_outer(const Expr& sol, const std::function<Expr(const Expr&)>& f) {
  if (sol.kind() == Kind::Arbitrary) return f(sol);
  return map_children(sol, [&](const Expr& c) { return wrap_outer(c, f); });
}

}  // namespace

TEST_CASE("scaling invariant verifies") {
  Problem p = parse_problem("vars x, y\nunknown z\neq x*d(z,x) + y*d(z,y) = 0\narbitrary C\nsolution C(y/x)\n");
  VerifyReport r = solution_q(p.system, *p.solution);
  CHECK(r.overall == Overall::Holds);
  CHECK(r.verdicts.size() == 1);
  CHECK(r.residuals[0].is_zero());
}

TEST_CASE("wrong solution fails") {
  Problem p = parse_problem("vars x, y\nunknown z\neq d(z,x) - 2*x = 0\nsolution x*y\n");
  VerifyReport r = solution_q(p.system, *p.solution);
  CHECK(r.overall == Overall::Fails);
  CHECK(r.max_residual > 1e-6);
}

TEST_CASE("solution fixtures verify") {
  auto files = solution_fixtures();
  CHECK(files.size() >= 8);
  for (const auto& f : files) {
    CAPTURE(f);
    Problem p = problem(f);
    REQUIRE(p.solution);
    VerifyReport r = solution_q(p.system, *p.solution);
    CHECK(r.overall != Overall::Fails);
    CHECK(r.max_residual < 1e-9);
  }
}

TEST_CASE("perturbed fixtures fail") {
  for (const auto& f : solution_fixtures()) {
    CAPTURE(f);
    Problem p = problem(f);
    Expr bumped = *p.solution + Expr::symbol(p.system.vars[0]);
    CHECK(solution_q(p.system, bumped).overall == Overall::Fails);
  }
}

TEST_CASE("composed arbitrary functions still verify") {
  for (const auto& f : solution_fixtures()) {
    CAPTURE(f);
    Problem p = problem(f);
    if (p.system.vars.size() > 6) continue;
    Expr squared = wrap_outer(*p.solution, [](const Expr& a) { return pow(a, Expr(2)); });
    if (squared == *p.solution) continue;
    CHECK(solution_q(p.system, squared).overall != Overall::Fails);
  }
}

TEST_CASE("verification is deterministic") {
  Problem p = problem(std::string(MAYER_CORPUS) + "/solutions/exact_trig.pde");
  VerifyReport a = solution_q(p.system, *p.solution, kZeroSamples, 11);
  VerifyReport b = solution_q(p.system, *p.solution, kZeroSamples, 11);
  CHECK(a.overall == b.overall);
  CHECK(a.max_residual == b.max_residual);
  CHECK(a.trials == b.trials);
  CHECK(a.seed == 11);
}
