#include "mayer/pde.h"

#include <cmath>

#include "mayer/eval.h"
#include "mayer/parse.h"
#include "mayer/print.h"
#include "mayer/rational_nf.h"
#include "mayer/solve.h"
#include "mayer/zero.h"

namespace mayer {

std::string PdeSystem::p_name(std::size_t i) const { return derivative_symbol_name(unknown, vars.at(i)); }

std::set<std::string> PdeSystem::p_names() const {
  std::set<std::string> out;
  for (std::size_t i = 0; i < vars.size(); ++i) out.insert(p_name(i));
  return out;
}

bool proportional(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return false;
  Expr q = normalize(a / b);
  return q.is_number() && !q.is_zero();
}

PdeSystem make_system(std::vector<std::string> vars, std::string unknown, std::vector<std::string> params,
                      const std::vector<Expr>& equations, std::vector<std::string>* trace) {
  PdeSystem sys{std::move(vars), std::move(unknown), std::move(params), {}};
  for (const Expr& raw : equations) {
    Expr e = equation_numerator(raw);
    if (is_zero(e) == ZeroVerdict::Zero) {
      if (trace) trace->push_back("dropped identically zero equation " + to_string(raw));
      continue;
    }
    bool dup = false;
    for (const Expr& prev : sys.equations) dup = dup || proportional(e, prev);
    if (dup) {
      if (trace) trace->push_back("dropped duplicate equation " + to_string(raw));
      continue;
    }
    sys.equations.push_back(e);
  }
  return sys;
}

bool contains_derivative(const Expr& e, const PdeSystem& sys) {
  if (contains_any_symbol(e, sys.p_names())) return true;
  bool found = false;
  visit(e, [&](const Expr& s) {
    if (s.is(Kind::SlotDerivative) && s.name() == sys.unknown) found = true;
    return !found;
  });
  return found;
}

Expr substitute_solution(const Expr& eq, const PdeSystem& sys, const Expr& value) {
  Bindings b{{sys.unknown, value}};
  for (std::size_t i = 0; i < sys.n(); ++i) b[sys.p_name(i)] = differentiate(value, sys.vars[i]);
  return substitute(eq, b);
}

namespace {

std::size_t exact_rank(const std::vector<std::vector<Expr>>& j) {
  KernelTable t;
  for (const auto& row : j)
    for (const Expr& e : row) t.scan(e);
  std::vector<std::vector<RationalNF>> m;
  for (const auto& row : j) {
    std::vector<RationalNF> r;
    for (const Expr& e : row) r.push_back(t.convert(e));
    m.push_back(std::move(r));
  }
  std::size_t rank = 0;
  std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c].is_zero()) continue;
      RationalNF f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] = m[r][k] - f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::size_t jacobian_rank(const PdeSystem& sys, std::uint64_t seed) {
  std::vector<std::vector<Expr>> j;
  bool rational = true;
  std::vector<Expr> all;
  for (const Expr& f : sys.equations) {
    std::vector<Expr> row;
    for (std::size_t k = 0; k < sys.n(); ++k) {
      row.push_back(differentiate(f, sys.p_name(k)));
      rational = rational && to_rational_nf(row.back()).has_value();
      all.push_back(row.back());
    }
    j.push_back(std::move(row));
  }
  if (j.empty()) return 0;
  if (rational) return exact_rank(j);
  PointSampler sampler(seed);
  std::size_t best = 0;
  int good = 0;
  for (int attempt = 0; attempt < 60 && good < 3; ++attempt) {
    Point pt = sampler.cover(all);
    std::vector<std::vector<long double>> m;
    try {
      for (const auto& row : j) {
        std::vector<long double> r;
        for (const Expr& e : row) r.push_back(eval_at(e, pt).as_float());
        m.push_back(std::move(r));
      }
    } catch (const EvalError&) {
      continue;
    } catch (const DivisionByZero&) {
      continue;
    }
    ++good;
    best = std::max(best, float_rank(std::move(m)));
  }
  return best;
}

namespace {

struct AffineHit {
  std::string p;
  Expr value;
  Expr coefficient;
};

std::optional<AffineHit> best_affine(const Expr& e, const std::vector<std::string>& unsolved) {
  KernelTable t;
  t.scan(e);
  Poly num = t.convert(e).numerator;
  std::optional<AffineHit> best;
  for (const auto& p : unsolved) {
    int idx = t.index_of(Expr::symbol(p));
    if (idx < 0 || !t.variable_expr(idx).is(Kind::Symbol)) continue;
    if (t.variables_mentioning({p}).size() != 1) continue;
    auto c = num.coefficients(idx);
    if (c.size() != 2) continue;
    Expr c1 = t.to_expr(c[1]);
    if (best) {
      std::size_t a = c1.size(), b = best->coefficient.size();
      if (a > b || (a == b && compare(c1, best->coefficient) >= 0)) continue;
    }
    best = AffineHit{p, normalize(-t.to_expr(c[0]) / c1), c1};
  }
  return best;
}

}  // namespace

std::optional<DerivSolve> solve_for_derivatives(const PdeSystem& sys) {
  DerivSolve out;
  std::vector<std::string> unsolved;
  for (std::size_t i = 0; i < sys.n(); ++i) unsolved.push_back(sys.p_name(i));
  std::vector<Expr> pending = sys.equations;

  auto consume = [&](std::size_t i, const std::string& p, const Expr& value) {
    for (auto& [q, v] : out.pivots) v = normalize(substitute(v, p, value));
    out.pivots[p] = value;
    std::erase(unsolved, p);
    pending.erase(pending.begin() + static_cast<long>(i));
    for (auto& e : pending) e = normalize(substitute(e, p, value));
  };

  while (!pending.empty()) {
    std::erase_if(pending, [](const Expr& e) { return is_zero(e) == ZeroVerdict::Zero; });
    if (pending.empty()) break;
    bool progressed = false;
    for (std::size_t i = 0; i < pending.size() && !progressed; ++i) {
      if (auto hit = best_affine(pending[i], unsolved)) {
        out.trace.push_back("pivot " + hit->p + " = " + to_string(hit->value));
        consume(i, hit->p, hit->value);
        progressed = true;
      }
    }
    for (std::size_t i = 0; i < pending.size() && !progressed; ++i) {
      for (const auto& p : unsolved) {
        std::vector<std::string> notes;
        auto r = isolate(pending[i], p, &notes);
        if (!r) continue;
        out.trace.push_back("pivot " + p + " = " + to_string(*r) + " (nonlinear)");
        for (auto& n : notes) out.trace.push_back(n);
        consume(i, p, *r);
        progressed = true;
        break;
      }
    }
    if (!progressed) return std::nullopt;
  }
  out.free = unsolved;
  return out;
}

}  // namespace mayer
