#include "props.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mayer/bracket.h"
#include "mayer/cascade.h"
#include "mayer/eval.h"
#include "mayer/input.h"
#include "mayer/print.h"
#include "mayer/rational_nf.h"
#include "mayer/single.h"
#include "mayer/solve.h"
#include "mayer/verify.h"
#include "mayer/zero.h"

namespace mayer::props {

int Gen::uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

bool Gen::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

Rational Gen::coeff() {
  int num = uniform(1, 5) * (coin() ? 1 : -1);
  Rational q(num, uniform(1, 3));
  q.canonicalize();
  return q;
}

Expr Gen::monomial(const std::vector<Expr>& atoms, int max_deg) {
  std::vector<Expr> fs{Expr(coeff())};
  int deg = uniform(0, max_deg);
  for (int i = 0; i < deg; ++i) fs.push_back(atoms[static_cast<std::size_t>(uniform(0, static_cast<int>(atoms.size()) - 1))]);
  return mul(std::move(fs));
}

Expr Gen::poly(const std::vector<Expr>& atoms, int max_terms, int max_deg) {
  std::vector<Expr> ts;
  int k = uniform(1, max_terms);
  for (int i = 0; i < k; ++i) ts.push_back(monomial(atoms, max_deg));
  return add(std::move(ts));
}

Expr Gen::smooth(const std::vector<Expr>& atoms, int depth) {
  if (depth <= 0 || coin(0.25)) return poly(atoms, 2, 2);
  Expr a = smooth(atoms, depth - 1);
  switch (uniform(0, 7)) {
    case 0: return a + smooth(atoms, depth - 1);
    case 1: return a * smooth(atoms, depth - 1);
    case 2: return a / (Expr(1) + pow(smooth(atoms, depth - 1), Expr(2)));
    case 3: return exp(a / Expr(4));
    case 4: return sin(a);
    case 5: return cos(a);
    case 6: return log(Expr(1) + pow(a, Expr(2)));
    default: return sqrt(Expr(1) + pow(a, Expr(2)));
  }
}

Expr Gen::table_integrand(const Expr& x, const std::vector<Expr>& params) {
  std::vector<Expr> atoms = params;
  Expr c = atoms.empty() || coin() ? Expr(coeff()) : atoms[static_cast<std::size_t>(uniform(0, static_cast<int>(atoms.size()) - 1))];
  Expr u = Expr(coeff()) * x + Expr(coeff());
  switch (uniform(0, 7)) {
    case 0: return c * pow(x, Expr(uniform(0, 5)));
    case 1: return c * pow(u, Expr(uniform(-3, 4)));
    case 2: return c * pow(u, Expr(Rational(1, uniform(2, 3))));
    case 3: return c * exp(u);
    case 4: return c * sin(u);
    case 5: return c * cos(u);
    case 6: return c * log(u);
    default: return poly({x}, 3, 4) + c * exp(u);
  }
}

PdeSystem context(std::size_t n) {
  PdeSystem s;
  for (std::size_t i = 1; i <= n; ++i) s.vars.push_back("x" + std::to_string(i));
  s.unknown = "z";
  return s;
}

namespace {

std::vector<Expr> jet_atoms(const PdeSystem& s, bool with_z) {
  std::vector<Expr> atoms;
  for (std::size_t i = 0; i < s.n(); ++i) {
    atoms.push_back(Expr::symbol(s.vars[i]));
    atoms.push_back(s.p(i));
  }
  if (with_z) atoms.push_back(s.z());
  return atoms;
}

/// Random operand for bracket identities; `z_free` drops z and the
/// transcendental factors so that the Poisson identities apply.
Expr operand(Gen& g, const PdeSystem& s, bool z_free) {
  auto atoms = jet_atoms(s, !z_free);
  Expr e = g.poly(atoms, 3, 2);
  if (!z_free && g.coin(0.3)) e = e * sin(Expr::symbol(s.vars[0]));
  if (!z_free && g.coin(0.3)) e = e + exp(s.z());
  return e;
}

void record(Outcome& o, bool pass, const std::string& what) {
  ++o.cases;
  if (!pass) {
    if (o.failures == 0) o.example = what;
    ++o.failures;
  }
}

bool exact_zero(const Expr& e) { return is_zero(e) == ZeroVerdict::Zero; }

template <class F>
Outcome bracket_property(const char* name, int cases, std::uint64_t seed, bool z_free, F&& check) {
  Outcome o{name};
  Gen g(seed);
  for (int i = 0; i < cases; ++i) {
    PdeSystem s = context(static_cast<std::size_t>(g.uniform(2, 3)));
    Expr f = operand(g, s, z_free), h = operand(g, s, z_free), k = operand(g, s, z_free);
    auto [pass, what] = check(g, s, f, h, k);
    record(o, pass, what);
  }
  return o;
}

}  // namespace

Outcome bracket_antisymmetry(int cases, std::uint64_t seed) {
  return bracket_property("bracket antisymmetry", cases, seed, false,
                          [](Gen&, const PdeSystem& s, const Expr& f, const Expr& g, const Expr&) {
                            Expr r = jacobi_mayer(f, g, s) + jacobi_mayer(g, f, s);
                            return std::pair{exact_zero(r), to_string(f) + " ; " + to_string(g)};
                          });
}

Outcome bracket_self(int cases, std::uint64_t seed) {
  return bracket_property("bracket [F,F] = 0", cases, seed, false,
                          [](Gen&, const PdeSystem& s, const Expr& f, const Expr&, const Expr&) {
                            return std::pair{exact_zero(jacobi_mayer(f, f, s)), to_string(f)};
                          });
}

Outcome bracket_bilinear(int cases, std::uint64_t seed) {
  return bracket_property("bracket bilinearity", cases, seed, false,
                          [](Gen& gen, const PdeSystem& s, const Expr& f, const Expr& g, const Expr& h) {
                            Expr a(gen.coeff()), b(gen.coeff());
                            Expr r = jacobi_mayer(a * f + b * g, h, s) - a * jacobi_mayer(f, h, s) -
                                     b * jacobi_mayer(g, h, s);
                            return std::pair{exact_zero(r), to_string(f) + " ; " + to_string(g) + " ; " + to_string(h)};
                          });
}

Outcome bracket_leibniz(int cases, std::uint64_t seed) {
  return bracket_property("bracket Leibniz rule", cases, seed, true,
                          [](Gen&, const PdeSystem& s, const Expr& f, const Expr& g, const Expr& h) {
                            Expr r = jacobi_mayer(f * g, h, s) - f * jacobi_mayer(g, h, s) - g * jacobi_mayer(f, h, s);
                            return std::pair{exact_zero(r), to_string(f) + " ; " + to_string(g) + " ; " + to_string(h)};
                          });
}

Outcome bracket_jacobi(int cases, std::uint64_t seed) {
  return bracket_property("bracket Jacobi identity", cases, seed, true,
                          [](Gen&, const PdeSystem& s, const Expr& f, const Expr& g, const Expr& h) {
                            Expr r = jacobi_mayer(f, jacobi_mayer(g, h, s), s) + jacobi_mayer(g, jacobi_mayer(h, f, s), s) +
                                     jacobi_mayer(h, jacobi_mayer(f, g, s), s);
                            return std::pair{exact_zero(r), to_string(f) + " ; " + to_string(g) + " ; " + to_string(h)};
                          });
}

Outcome normalize_idempotent(int cases, std::uint64_t seed) {
  Outcome o{"normalize idempotence"};
  Gen g(seed);
  std::vector<Expr> atoms{Expr::symbol("x"), Expr::symbol("y"), Expr::symbol("z")};
  for (int i = 0; i < cases; ++i) {
    try {
      Expr e = g.smooth(atoms, 3);
      if (g.coin(0.3)) e = e / g.poly(atoms, 3, 2);
      Expr once = normalize(e);
      record(o, normalize(once) == once, to_string(e));
    } catch (const DivisionByZero&) {
      --i;  // the generator produced 1/0; draw again
    }
  }
  return o;
}

Outcome derivative_finite_difference(int cases, std::uint64_t seed, double tol) {
  Outcome o{"derivative vs finite differences"};
  Gen g(seed);
  PointSampler sampler(seed + 1);
  std::vector<Expr> atoms{Expr::symbol("x"), Expr::symbol("y")};
  const Rational h(1, 100000);
  int guard = 0;
  while (o.cases < cases && guard++ < cases * 20) {
    Expr e = g.smooth(atoms, 3);
    std::string v = g.coin() ? "x" : "y";
    Expr d = differentiate(e, v);
    Point pt;
    pt.symbols = {{"x", sampler.positive_rational()}, {"y", sampler.positive_rational()}};
    Point lo = pt, hi = pt;
    lo.symbols[v] -= h;
    hi.symbols[v] += h;
    long double exact, fd;
    try {
      exact = eval_at(d, pt).as_float();
      fd = (eval_at(e, hi).as_float() - eval_at(e, lo).as_float()) / (2 * h.get_d());
    } catch (const EvalError&) {
      continue;
    } catch (const DivisionByZero&) {
      continue;
    }
    if (!std::isfinite(static_cast<double>(exact)) || std::fabs(exact) > 1e6) continue;
    long double err = std::fabs(exact - fd) / std::max<long double>(1, std::fabs(exact));
    record(o, err < tol, to_string(e) + " d/d" + v);
  }
  return o;
}

Outcome integrate_round_trip(int attempts, std::uint64_t seed) {
  Outcome o{"integrate/differentiate round trip"};
  Gen g(seed);
  Expr x = Expr::symbol("x");
  std::vector<Expr> params{Expr::symbol("a"), Expr::symbol("b")};
  for (int i = 0; i < attempts; ++i) {
    Expr e = g.table_integrand(x, params);
    auto r = integrate_univariate(e, "x");
    if (!r) continue;
    record(o, zero_like(is_zero(differentiate(*r, "x") - e)), to_string(e));
  }
  return o;
}

Outcome single_soundness(int cases, std::uint64_t seed) {
  Outcome o{"single-solution soundness"};
  Gen g(seed);
  int solved = 0;
  for (int i = 0; i < cases; ++i) {
    PdeSystem s = context(static_cast<std::size_t>(g.uniform(2, 4)));
    std::vector<Expr> xs;
    for (const auto& v : s.vars) xs.push_back(Expr::symbol(v));
    Expr eq(0);
    for (std::size_t k = 0; k < s.n(); ++k) {
      if (g.coin(0.3)) continue;
      Expr a = g.coin(0.5) ? Expr(g.coeff()) : g.monomial(xs, 2);
      eq = eq + a * s.p(k);
    }
    if (eq.is_zero()) eq = s.p(0);
    if (g.coin(0.3)) eq = eq + g.monomial(xs, 2);
    if (g.coin(0.2)) eq = eq + Expr(g.coeff()) * s.z();
    eq = normalize(eq);
    s.equations = {eq};
    NameSupply names(reserved_names(s));
    auto sol = solve_single_pde(eq, s, names);
    if (!sol) {
      record(o, true, "");
      continue;
    }
    ++solved;
    record(o, zero_like(is_zero(substitute_solution(eq, s, sol->expression))),
           to_string(eq) + " -> " + to_string(sol->expression));
  }
  if (solved == 0) record(o, false, "no random equation was solved");
  return o;
}

Outcome corpus_soundness(const std::string& corpus_dir) {
  Outcome o{"corpus soundness"};
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(corpus_dir)) {
    if (entry.path().extension() == ".pde") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    Problem p = parse_problem(ss.str());
    for (const Expr& eq : p.system.equations) {
      NameSupply names(reserved_names(p.system));
      auto sol = solve_single_pde(eq, p.system, names);
      if (!sol) continue;
      record(o, zero_like(is_zero(substitute_solution(eq, p.system, sol->expression))),
             f.filename().string() + ": " + to_string(eq));
    }
    auto out = solve_overdetermined(p.system);
    if (out.solution && out.solution->unsolved.empty()) {
      bool pass = true;
      for (const Expr& r : residual(p.system, out.solution->solution)) pass = pass && zero_like(is_zero(r));
      record(o, pass, f.filename().string() + ": general solution");
    }
  }
  return o;
}

}  // namespace mayer::props
