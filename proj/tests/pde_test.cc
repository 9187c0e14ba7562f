#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mayer/bracket.h"
#include "mayer/completion.h"
#include "mayer/input.h"
#include "mayer/parse.h"
#include "mayer/print.h"
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

Expr S(const PdeSystem& s, const std::string& text) {
  ParseContext ctx;
  ctx.unknown = s.unknown;
  ctx.derivative_vars.insert(s.vars.begin(), s.vars.end());
  return parse_expr(text, ctx);
}

const char* kObstruction = "vars x, y\nunknown z\neq d(z,x) = y\neq d(z,y) = 0\n";
const char* kNeedsCompletion = "vars x1, x2, x3\nunknown z\neq d(z,x1) - x2*d(z,x3)\neq d(z,x2)\n";

void round_trip(const PdeSystem& s, const DerivSolve& d) {
  for (const Expr& e : s.equations) CHECK(zero_like(is_zero(substitute(e, d.pivots))));
  if (s.m() <= s.n()) CHECK(d.pivots.size() + d.free.size() == s.n());
}

}  // namespace

TEST_CASE("jacobian rank") {
  CHECK(jacobian_rank(corpus("linear_pair.pde")) == 2);
  CHECK(jacobian_rank(corpus("invariants_six.pde")) == 4);
  PdeSystem dup = corpus("linear_pair.pde");
  dup.equations.push_back(dup.equations[0]);
  CHECK(jacobian_rank(dup) == 2);
  CHECK(jacobian_rank(corpus("product_pair.pde")) == 2);
}

TEST_CASE("construction drops zero and proportional equations") {
  PdeSystem s = sys("vars x, y\nunknown z\neq d(z,x) - y\neq 2*d(z,x) - 2*y\neq x - x\n");
  CHECK(s.m() == 1);
}

TEST_CASE("solve for derivatives") {
  PdeSystem s5 = corpus("linear_pair.pde");
  auto d = solve_for_derivatives(s5);
  REQUIRE(d);
  CHECK(d->pivots.size() == 2);
  CHECK(d->free.size() == 2);
  round_trip(s5, *d);

  PdeSystem ob = sys(kObstruction);
  auto d2 = solve_for_derivatives(ob);
  REQUIRE(d2);
  CHECK(d2->pivots.at(ob.p_name(0)) == Expr::symbol("y"));
  CHECK(d2->pivots.at(ob.p_name(1)).is_zero());
  CHECK(d2->free.empty());

  PdeSystem prod = corpus("product_pair.pde");
  PdeSystem first = prod;
  first.equations = {prod.equations[0]};
  auto d3 = solve_for_derivatives(first);
  REQUIRE(d3);
  REQUIRE(d3->pivots.count(prod.p_name(4)));
  CHECK(is_zero(d3->pivots.at(prod.p_name(4)) - S(prod, "y2*y4/d(f,y1)")) == ZeroVerdict::Zero);
  round_trip(prod, *solve_for_derivatives(prod));
}

TEST_CASE("derivative detection") {
  PdeSystem s = sys(kNeedsCompletion);
  CHECK(contains_derivative(S(s, "d(z,x3)"), s));
  CHECK_FALSE(contains_derivative(S(s, "x1*z - 1"), s));
  CHECK(contains_derivative(S(s, "-d(z,x3)"), s));
  CHECK(contains_derivative(slot_derivative("z", {1, 0, 0}, {Expr::symbol("x1"), Expr(0), Expr(1)}), s));
}

TEST_CASE("bracket examples") {
  PdeSystem ob = sys(kObstruction);
  CHECK(jacobi_mayer(ob.equations[0], ob.equations[1], ob) == Expr(-1));
  PdeSystem nc = sys(kNeedsCompletion);
  CHECK(jacobi_mayer(nc.equations[0], nc.equations[1], nc) == S(nc, "-d(z,x3)"));
  Expr f = S(nc, "x1*d(z,x2)^2 + z*d(z,x3)");
  CHECK(is_zero(jacobi_mayer(f, f, nc)) == ZeroVerdict::Zero);
}

TEST_CASE("restricted brackets") {
  auto b = restricted_brackets(corpus("linear_pair.pde"));
  REQUIRE(b);
  REQUIRE(b->size() == 1);
  CHECK(is_zero((*b)[0].restricted) == ZeroVerdict::Zero);

  PdeSystem ob = sys(kObstruction);
  DerivSolve d;
  auto b2 = restricted_brackets(ob, &d);
  REQUIRE(b2);
  REQUIRE(b2->size() == 1);
  CHECK((*b2)[0].restricted == Expr(-1));
  // raw and restricted agree once the pivots are substituted
  CHECK(zero_like(is_zero(substitute((*b2)[0].raw, d.pivots) - (*b2)[0].restricted)));

  PdeSystem one = ob;
  one.equations.pop_back();
  auto b3 = restricted_brackets(one);
  REQUIRE(b3);
  CHECK(b3->empty());
}

TEST_CASE("bracket classification") {
  PdeSystem s = sys(kNeedsCompletion);
  CHECK(classify_bracket(Expr(0), s) == BracketClass::Zero);
  CHECK(classify_bracket(Expr(-1), s) == BracketClass::ObstructionXZ);
  CHECK(classify_bracket(S(s, "-d(z,x3)"), s) == BracketClass::NewEquation);
  bool prob = false;
  CHECK(classify_bracket(S(s, "sin(x1)^2 + cos(x1)^2 - 1"), s, 0, &prob) == BracketClass::Zero);
  CHECK(prob);
}

TEST_CASE("completion") {
  PdeSystem nc = sys(kNeedsCompletion);
  CompatReport r = complete(nc);
  CHECK(r.verdict == Compat::Compatible);
  REQUIRE(r.added.size() == 1);
  CHECK(proportional(r.added[0], S(nc, "d(z,x3)")));
  CHECK(r.completed.m() == 3);
  CHECK(r.rounds == 2);

  CompatReport again = complete(r.completed);
  CHECK(again.verdict == Compat::Compatible);
  CHECK(again.added.empty());
  CHECK(again.rounds == 1);

  CompatReport bad = complete(sys(kObstruction));
  CHECK(bad.verdict == Compat::Incompatible);
  CHECK(bad.rounds == 1);
  REQUIRE(bad.witness);
  CHECK(*bad.witness == Expr(-1));

  CompatReport s5 = complete(corpus("linear_pair.pde"));
  CHECK(s5.verdict == Compat::Compatible);
  CHECK(s5.added.empty());
  CHECK(s5.rounds == 1);
}

TEST_CASE("completion invariants over the corpus") {
  for (const char* name : {"linear_pair.pde", "invariants_six.pde", "polynomial_pair.pde", "product_pair.pde",
                           "characteristic_triple.pde", "exact_trig.pde", "needs_completion.pde"}) {
    CAPTURE(name);
    PdeSystem s = corpus(name);
    CompatReport r = complete(s);
    REQUIRE(r.verdict == Compat::Compatible);
    CHECK(r.completed.m() <= r.completed.n());
    CHECK(r.rounds <= static_cast<int>(s.n() - s.m()) + 1);
    // input equations survive, brackets of the completed system vanish
    for (const Expr& e : s.equations) {
      bool kept = false;
      for (const Expr& c : r.completed.equations) kept = kept || proportional(e, c);
      CHECK(kept);
    }
    auto b = restricted_brackets(r.completed);
    REQUIRE(b);
    for (const auto& v : *b) CHECK(zero_like(is_zero(v.restricted)));
  }
}

TEST_CASE("equation count bound") {
  // Two brackets would push three equations onto two variables.
  PdeSystem s = sys("vars x, y\nunknown z\neq d(z,x) - z*y\neq d(z,y) - x\n");
  CompatReport r = complete(s);
  CHECK(r.verdict != Compat::Compatible);
}

TEST_CASE("partial and total bracket forms are compared when z appears") {
  // z = x*y solves both; only the total-derivative bracket vanishes
  CompatReport r = complete(sys("vars x, y\nunknown z\neq d(z,x) = z/x\neq d(z,y) = x\n"));
  CHECK(r.verdict == Compat::Compatible);
  bool flagged = false;
  for (const auto& t : r.trace) flagged = flagged || t.find("partial-derivative form would be obstruction") != std::string::npos;
  CHECK(flagged);

  CompatReport quiet = complete(sys(kNeedsCompletion));
  for (const auto& t : quiet.trace) CHECK(t.find("partial-derivative") == std::string::npos);
}
