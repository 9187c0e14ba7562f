#include <random>

#include "doctest.h"
#include "mayer/input.h"
#include "mayer/parse.h"
#include "mayer/print.h"
#include "mayer/rational_nf.h"
#include "mayer/single.h"
#include "mayer/verify.h"
#include "mayer/zero.h"

using namespace mayer;

namespace {

PdeSystem sys(const std::string& text) { return parse_problem(text).system; }

Expr P(const std::string& s) { return parse_expr(s, ParseContext{}); }

VectorField field(const std::vector<std::string>& vars, const std::vector<std::string>& coeffs) {
  VectorField v{vars, {}};
  for (const auto& c : coeffs) v.coeffs.push_back(P(c));
  return v;
}

// Every invariant is annihilated by the field and together they are
// functionally independent.
void certify(const VectorField& v, const std::vector<Expr>& phis) {
  for (const Expr& phi : phis) {
    CAPTURE(to_string(phi));
    CHECK(zero_like(is_zero(v.apply(phi))));
  }
  CHECK(gradient_rank(phis, v.vars) == phis.size());
}

bool solves(const Expr& eq, const PdeSystem& s, const Expr& value) {
  return zero_like(is_zero(substitute_solution(eq, s, value)));
}

}  // namespace

TEST_CASE("single equation: one derivative") {
  PdeSystem s = sys("vars x, y\nunknown z\neq d(z,x) = 0\n");
  NameSupply names;
  auto r = solve_single_pde(s.equations[0], s, names);
  REQUIRE(r);
  CHECK(r->expression == arbitrary("C1", {Expr::symbol("y")}));
  CHECK(r->new_fn == "C1");
}

TEST_CASE("single equation: Euler operator") {
  PdeSystem s = sys("vars x, y\nunknown z\neq x*d(z,x) + y*d(z,y) = 0\n");
  NameSupply names;
  auto r = solve_single_pde(s.equations[0], s, names);
  REQUIRE(r);
  REQUIRE(r->invariants.size() == 1);
  // the invariant is a function of y/x
  CHECK(gradient_rank({r->invariants[0], P("y/x")}, {"x", "y"}) == 1);
  CHECK(solves(s.equations[0], s, r->expression));
}

TEST_CASE("single equation from a pair") {
  PdeSystem s = sys(
      "vars y1, y2, y3, y4\nunknown f\n"
      "eq d(f,y2) + (1/y4)*d(f,y3) - (2/y3)*d(f,y4) = 0\n");
  NameSupply names;
  auto r = solve_single_pde(s.equations[0], s, names);
  REQUIRE(r);
  CHECK(r->invariants.size() == 3);
  CHECK(solves(s.equations[0], s, r->expression));
}

TEST_CASE("single equation: inhomogeneous") {
  PdeSystem s = sys("vars x, y\nunknown z\neq d(z,x) - 2*x = 0\n");
  NameSupply names;
  auto r = solve_single_pde(s.equations[0], s, names);
  REQUIRE(r);
  CHECK(solves(s.equations[0], s, r->expression));
}

TEST_CASE("names avoid the input") {
  NameSupply names({"C1", "C2"});
  CHECK(names.function() == "C3");
  CHECK(names.function() == "C4");
  CHECK(names.fresh("u") != names.fresh("u"));
}

TEST_CASE("first integrals: scaling") {
  VectorField v = field({"x", "y"}, {"x", "y"});
  auto phis = first_integrals(v, 1);
  REQUIRE(phis.size() == 1);
  CHECK(gradient_rank({phis[0], P("y/x")}, {"x", "y"}) == 1);
  certify(v, phis);
}

TEST_CASE("first integrals: invariant coefficients") {
  VectorField v = field({"x", "y", "u"}, {"u", "2*u + 1", "0"});
  auto phis = first_integrals(v, 2);
  REQUIRE(phis.size() == 2);
  certify(v, phis);
}

TEST_CASE("first integrals: polynomial ansatz") {
  VectorField v = field({"x", "y", "z", "t"}, {"1", "0", "t + x*y + x*z", "y + z - 3*x"});
  std::vector<std::string> trace;
  auto phis = first_integrals(v, 3, {}, &trace);
  REQUIRE(phis.size() >= 2);
  certify(v, phis);
  // the polynomial invariant is among them, up to functions of y
  std::vector<Expr> with = phis;
  with.push_back(P("z - t*x - x^3 - y^2/2"));
  CHECK(gradient_rank(with, v.vars) == phis.size());
}

TEST_CASE("first integrals: random scaling fields") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> w(-3, 3);
  std::vector<std::string> vars = {"x1", "x2", "x3", "x4"};
  for (int round = 0; round < 25; ++round) {
    std::vector<std::string> coeffs;
    int nonzero = 0;
    for (const auto& x : vars) {
      int c = w(rng);
      nonzero += c != 0;
      coeffs.push_back(std::to_string(c) + "*" + x);
    }
    if (nonzero == 0) continue;
    VectorField v = field(vars, coeffs);
    auto phis = first_integrals(v, 3);
    CAPTURE(round);
    CHECK(phis.size() == 3);
    certify(v, phis);
  }
}

TEST_CASE("exact forms") {
  PdeSystem s = sys("vars x, y\nunknown z\neq d(z,x) = y\neq d(z,y) = x\n");
  NameSupply names;
  auto r = integrate_exact_form({{s.p_name(0), P("y")}, {s.p_name(1), P("x")}}, s, names);
  REQUIRE(r);
  CHECK(solution_q(s, *r).overall == Overall::Holds);
  CHECK(arbitrary_functions(*r).size() == 1);

  PdeSystem q = sys("vars x, y\nunknown z\neq d(z,x) = 2*x\neq d(z,y) = 3*y^2\n");
  auto r2 = integrate_exact_form({{q.p_name(0), P("2*x")}, {q.p_name(1), P("3*y^2")}}, q, names);
  REQUIRE(r2);
  auto consts = arbitrary_functions(*r2);
  REQUIRE(consts.size() == 1);
  Expr k = arbitrary(consts.begin()->first, {});
  CHECK(normalize(*r2 - k - P("x^2 + y^3")).is_zero());
}

TEST_CASE("exact form with trigonometric pivots") {
  PdeSystem s = sys(
      "vars x, y, z\nunknown u\n"
      "eq d(u,x) = 4*sin(y)*sin(y)*cos(z)\n"
      "eq (1/x)*d(u,y) = 4*cos(z)*sin(2*y)\n"
      "eq (1/(x*sin(y)))*d(u,z) = -4*sin(y)*sin(z)\n");
  auto d = solve_for_derivatives(s);
  REQUIRE(d);
  NameSupply names;
  auto r = integrate_exact_form(d->pivots, s, names);
  REQUIRE(r);
  auto consts = arbitrary_functions(*r);
  REQUIRE(consts.size() == 1);
  Expr k = arbitrary(consts.begin()->first, {});
  Expr expected = P("x*(-cos(2*y - z) + 2*cos(z) - cos(2*y + z))");
  CHECK(zero_like(is_zero(*r - k - expected)));
}

TEST_CASE("non-exact forms are rejected") {
  PdeSystem s = sys("vars x, y\nunknown z\neq d(z,x) = y\neq d(z,y) = 0\n");
  NameSupply names;
  CHECK_FALSE(integrate_exact_form({{s.p_name(0), P("y")}, {s.p_name(1), Expr(0)}}, s, names));
}
