#include "mayer/cascade.h"

#include <algorithm>

#include "mayer/parse.h"
#include "mayer/print.h"
#include "mayer/rational_nf.h"
#include "mayer/solve.h"
#include "mayer/zero.h"

namespace mayer {

const char* status_name(Status s) {
  switch (s) {
    case Status::Solved: return "solved";
    case Status::PartiallySolved: return "partially_solved";
    case Status::Incompatible: return "incompatible";
    case Status::Unsupported: return "unsupported";
  }
  return "?";
}

std::set<std::string> reserved_names(const PdeSystem& sys) {
  std::set<std::string> out(sys.vars.begin(), sys.vars.end());
  out.insert(sys.unknown);
  out.insert(sys.params.begin(), sys.params.end());
  for (const Expr& e : sys.equations) {
    for (const auto& s : free_symbols(e)) out.insert(s);
    for (const auto& [f, arity] : arbitrary_functions(e)) out.insert(f);
  }
  return out;
}

namespace {

/// The single application of `fn` inside `rule`, if there is exactly one.
std::optional<Expr> application_of(const Expr& rule, const std::string& fn) {
  ExprSet apps;
  bool other = false;
  visit(rule, [&](const Expr& s) {
    if (s.is(Kind::Arbitrary) && s.name() == fn) {
      apps.insert(s);
      return false;
    }
    if (s.is(Kind::SlotDerivative) && s.name() == fn) other = true;
    return true;
  });
  if (other || apps.size() != 1) return std::nullopt;
  return *apps.begin();
}

/// Solves the invariants for old variables, greedily picking the variable
/// with the fewest occurrences. Returns old variable -> value in the fresh
/// and persisting variables.
std::optional<std::map<std::string, Expr>> invert(const std::vector<Expr>& invariants,
                                                  const std::vector<std::string>& fresh,
                                                  const std::vector<std::string>& vars,
                                                  std::vector<std::string>* notes) {
  std::vector<Expr> work = invariants;
  std::map<std::string, Expr> map;
  for (std::size_t j = 0; j < work.size(); ++j) {
    std::vector<std::pair<std::size_t, std::string>> order;
    for (const auto& v : vars) {
      if (map.count(v) || !contains_symbol(work[j], v)) continue;
      std::size_t count = 0;
      for (std::size_t k = j; k < work.size(); ++k) {
        visit(work[k], [&](const Expr& s) {
          if (s.is(Kind::Symbol) && s.name() == v) ++count;
          return true;
        });
      }
      order.emplace_back(count, v);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::optional<Expr> value;
    std::string chosen;
    for (const auto& [count, v] : order) {
      value = isolate(work[j] - Expr::symbol(fresh[j]), v, notes);
      if (value) {
        chosen = v;
        break;
      }
    }
    if (!value) return std::nullopt;
    for (auto& [old, e] : map) e = normalize(substitute(e, chosen, *value));
    map[chosen] = *value;
    for (std::size_t k = j + 1; k < work.size(); ++k) work[k] = normalize(substitute(work[k], chosen, *value));
  }
  for (std::size_t j = 0; j < invariants.size(); ++j) {
    if (!zero_like(is_zero(substitute(invariants[j], map) - Expr::symbol(fresh[j])))) return std::nullopt;
  }
  return map;
}

/// Splits e by monomials in kernels built from persisting variables only.
std::optional<std::vector<Expr>> separate(const Expr& e, const std::set<std::string>& old,
                                          const std::set<std::string>& keep) {
  KernelTable t;
  t.scan(e);
  Poly num = t.convert(e).numerator;
  std::vector<int> sep;
  for (int v = 0; v < t.nvars(); ++v) {
    bool has_keep = false, has_other = false;
    for (const auto& x : free_symbols(t.variable_expr(v))) {
      if (keep.count(x)) has_keep = true;
      else if (old.count(x)) return std::nullopt;
      else has_other = true;
    }
    if (has_keep && has_other) return std::nullopt;
    if (has_keep) sep.push_back(v);
  }
  std::map<Exponents, std::vector<Term>> groups;
  for (const Term& term : num.terms()) {
    Exponents key;
    Term rest = term;
    for (int v : sep) {
      key.push_back(term.exps[static_cast<std::size_t>(v)]);
      rest.exps[static_cast<std::size_t>(v)] = 0;
    }
    groups[key].push_back(std::move(rest));
  }
  std::vector<Expr> out;
  for (auto& [key, terms] : groups) {
    out.push_back(equation_numerator(t.to_expr(Poly::from_terms(t.nvars(), std::move(terms)))));
  }
  return out;
}

bool negative_radicand(const Expr& e) {
  bool found = false;
  visit(e, [&](const Expr& s) {
    if (s.is(Kind::Power) && s.base().is_number() && s.base().number() < 0 && !s.exponent().is_integer())
      found = true;
    return !found;
  });
  return found;
}

/// When the persisting variables sit inside kernels shared with the fresh
/// ones, they can still drop out of the ratios between the coefficients of
/// the unknown's monomials. Those ratios are certified independent and the
/// persisting variables pinned to a constant.
std::optional<std::vector<Expr>> pin(const Expr& e, const Level& lv, const std::set<std::string>& old,
                                     const std::set<std::string>& keep) {
  std::set<std::string> wnames{lv.next_fn};
  for (const auto& u : lv.fresh) wnames.insert(derivative_symbol_name(lv.next_fn, u));
  KernelTable t;
  t.scan(e);
  Poly num = t.convert(e).numerator;
  std::vector<int> wv = t.variables_mentioning(wnames);
  std::map<Exponents, std::vector<Term>> groups;
  for (const Term& term : num.terms()) {
    Exponents key;
    Term rest = term;
    for (int v : wv) {
      key.push_back(term.exps[static_cast<std::size_t>(v)]);
      rest.exps[static_cast<std::size_t>(v)] = 0;
    }
    groups[key].push_back(std::move(rest));
  }
  std::vector<Expr> monomials, coeffs;
  for (auto& [key, terms] : groups) {
    Term m{Exponents(static_cast<std::size_t>(t.nvars()), 0), Rational(1)};
    for (std::size_t i = 0; i < wv.size(); ++i) m.exps[static_cast<std::size_t>(wv[i])] = key[i];
    monomials.push_back(t.to_expr(Poly::from_terms(t.nvars(), {m})));
    coeffs.push_back(t.to_expr(Poly::from_terms(t.nvars(), std::move(terms))));
  }
  if (coeffs.empty()) return std::vector<Expr>{};
  for (const Expr& c : coeffs)
    if (contains_any_symbol(c, wnames)) return std::nullopt;
  std::vector<Expr> ratios;
  for (const Expr& c : coeffs) ratios.push_back(normalize(c / coeffs[0]));
  for (int a : {1, 3, 2, 5, 7}) {
    try {
      Bindings b;
      for (const auto& x : keep) b[x] = Expr(a);
      Expr out(0);
      bool ok = true;
      for (std::size_t k = 0; k < ratios.size() && ok; ++k) {
        Expr r = normalize(substitute(ratios[k], b));
        ok = !contains_any_symbol(r, old) && !negative_radicand(r) && zero_like(is_zero(ratios[k] - r));
        out = out + r * monomials[k];
      }
      if (ok) return std::vector<Expr>{equation_numerator(out)};
    } catch (const DivisionByZero&) {
    }
  }
  return std::nullopt;
}

/// Rewrites an equation of `lv.sys` as equations of the next level. Terms
/// are separated by monomials in the persisting variables, which the new
/// unknown cannot depend on.
std::optional<std::vector<Expr>> carry(const Expr& eq, const Level& lv, const Expr& app) {
  const PdeSystem& s = lv.sys;
  try {
    Expr w = Expr::symbol(lv.next_fn);
    Expr r = replace_all(*lv.rule, {{app, w}});
    Expr rw = differentiate(r, lv.next_fn);
    Bindings b{{s.unknown, r}};
    for (std::size_t i = 0; i < s.n(); ++i) {
      Expr chain(0);
      for (std::size_t j = 0; j < lv.fresh.size(); ++j) {
        chain = chain + Expr::symbol(derivative_symbol_name(lv.next_fn, lv.fresh[j])) *
                            differentiate(lv.invariants[j], s.vars[i]);
      }
      b[s.p_name(i)] = differentiate(r, s.vars[i]) + rw * chain;
    }
    Expr e = substitute(eq, b);
    e = equation_numerator(substitute(e, lv.inversion));
    std::set<std::string> old(s.vars.begin(), s.vars.end());
    std::set<std::string> keep(lv.persisting.begin(), lv.persisting.end());
    if (!contains_any_symbol(e, keep)) {
      if (contains_any_symbol(e, old)) return std::nullopt;
      return std::vector<Expr>{e};
    }
    if (auto parts = separate(e, old, keep)) return parts;
    return pin(e, lv, old, keep);
  } catch (const DivisionByZero&) {
    return std::nullopt;
  }
}

struct Queue {
  std::vector<Expr> retry;   // failed once, tried first at the next level
  std::vector<Expr> fresh;
  std::vector<Expr> stuck;   // failed twice, carried along
};

bool try_exact(Level& lv, const Queue& q, NameSupply& names, const SolveOptions& opts, CascadeState& st) {
  std::size_t count = q.retry.size() + q.fresh.size() + q.stuck.size();
  if (lv.sys.n() == 0 || count != lv.sys.n()) return false;
  PdeSystem all = lv.sys;
  all.equations = q.retry;
  all.equations.insert(all.equations.end(), q.fresh.begin(), q.fresh.end());
  all.equations.insert(all.equations.end(), q.stuck.begin(), q.stuck.end());
  auto ds = solve_for_derivatives(all);
  if (!ds || !ds->free.empty()) return false;
  NameSupply trial = names;
  auto z = integrate_exact_form(ds->pivots, all, trial, opts);
  if (!z) return false;
  names = trial;
  for (const auto& [f, arity] : arbitrary_functions(*z)) {
    if (!reserved_names(lv.sys).count(f)) st.generated.push_back(f);
  }
  lv.rule = *z;
  st.trace.push_back("level " + std::to_string(st.levels.size()) + ": exact form " + lv.sys.unknown + " = " +
                     to_string(*z));
  return true;
}

}  // namespace

CascadeState pdes_to_rules(const PdeSystem& sys, NameSupply& names, const SolveOptions& opts) {
  CascadeState st;
  Queue q;
  q.fresh = sys.equations;
  PdeSystem cur = sys;
  cur.equations.clear();

  while (true) {
    opts.check_deadline();
    std::size_t index = st.levels.size();
    std::string tag = "level " + std::to_string(index) + ": ";
    Level lv;
    lv.sys = cur;
    lv.sys.equations = q.retry;
    lv.sys.equations.insert(lv.sys.equations.end(), q.fresh.begin(), q.fresh.end());
    lv.sys.equations.insert(lv.sys.equations.end(), q.stuck.begin(), q.stuck.end());
    if (lv.sys.equations.empty()) break;

    if (try_exact(lv, q, names, opts, st)) {
      st.levels.push_back(std::move(lv));
      break;
    }

    // Candidates: retried equations first, then the rest in input order.
    std::optional<SingleSolution> sol;
    Expr solved;
    Queue next;
    std::vector<std::pair<Expr, bool>> cands;
    for (const Expr& e : q.retry) cands.emplace_back(e, true);
    for (const Expr& e : q.fresh) cands.emplace_back(e, false);
    std::size_t k = 0;
    if (lv.sys.n() > 0) {
      for (; k < cands.size() && !sol; ++k) {
        const auto& [e, retried] = cands[k];
        if (retried) st.trace.push_back(tag + "retry " + to_string(e));
        sol = solve_single_pde(e, lv.sys, names, opts);
        if (sol) {
          solved = e;
        } else {
          st.trace.push_back(tag + "no solution for " + to_string(e) + (retried ? ", kept unsolved" : ", parked"));
          (retried ? next.stuck : next.retry).push_back(e);
        }
      }
    }
    if (!sol) {
      for (const Expr& e : lv.sys.equations) st.unsolved.push_back({index, e});
      st.levels.push_back(std::move(lv));
      break;
    }
    for (; k < cands.size(); ++k) next.fresh.push_back(cands[k].first);
    next.stuck.insert(next.stuck.end(), q.stuck.begin(), q.stuck.end());

    st.generated.push_back(sol->new_fn);
    lv.rule = sol->expression;
    lv.next_fn = sol->new_fn;
    st.trace.push_back(tag + "solved " + to_string(solved) + " = 0: " + lv.sys.unknown + " = " +
                       to_string(sol->expression));
    for (const auto& n : sol->notes) st.trace.push_back(tag + n);

    auto app = application_of(sol->expression, sol->new_fn);
    if (!app) {
      st.trace.push_back(tag + "cannot isolate the applications of " + sol->new_fn);
      for (auto* list : {&next.retry, &next.fresh, &next.stuck})
        for (const Expr& e : *list) st.unsolved.push_back({index, e});
      lv.next_fn.clear();
      st.levels.push_back(std::move(lv));
      break;
    }
    lv.invariants = app->operands();
    for (std::size_t j = 0; j < lv.invariants.size(); ++j) lv.fresh.push_back(names.fresh("u"));

    std::vector<std::string> notes;
    auto inv = invert(lv.invariants, lv.fresh, lv.sys.vars, &notes);
    for (const auto& n : notes) st.trace.push_back(tag + n);
    if (!inv) {
      st.trace.push_back(tag + "renaming failed; remaining equations left unsolved");
      for (auto* list : {&next.retry, &next.fresh, &next.stuck})
        for (const Expr& e : *list) st.unsolved.push_back({index, e});
      st.levels.push_back(std::move(lv));
      break;
    }
    lv.inversion = *inv;
    for (const auto& v : lv.sys.vars)
      if (!lv.inversion.count(v)) lv.persisting.push_back(v);
    for (std::size_t j = 0; j < lv.fresh.size(); ++j) {
      st.trace.push_back(tag + lv.fresh[j] + " = " + to_string(lv.invariants[j]));
    }

    PdeSystem nsys{lv.fresh, lv.next_fn, sys.params, {}};
    Queue carried;
    std::vector<Expr> seen;
    auto move_list = [&](const std::vector<Expr>& from, std::vector<Expr>& to) {
      for (const Expr& e : from) {
        auto parts = carry(e, lv, *app);
        if (!parts) {
          st.trace.push_back(tag + "cannot rewrite " + to_string(e) + " in the new variables");
          st.unsolved.push_back({index, e});
          continue;
        }
        for (const Expr& part : *parts) {
          if (zero_like(is_zero(part, opts.seed))) continue;
          bool dup = false;
          for (const Expr& s : seen) dup = dup || proportional(part, s);
          if (dup) continue;
          seen.push_back(part);
          to.push_back(part);
        }
      }
    };
    move_list(next.retry, carried.retry);
    move_list(next.fresh, carried.fresh);
    move_list(next.stuck, carried.stuck);
    st.levels.push_back(std::move(lv));
    q = std::move(carried);
    cur = nsys;
  }
  return st;
}

namespace {

/// Value of levels[from].sys.unknown in levels[from].sys.vars.
Expr fold_from(const CascadeState& st, std::size_t from) {
  Expr value;
  std::size_t last = st.levels.size() - 1;
  const Level& tail = st.levels[last];
  if (tail.rule) {
    value = *tail.rule;
  } else {
    std::vector<Expr> args;
    for (const auto& v : tail.sys.vars) args.push_back(Expr::symbol(v));
    value = arbitrary(tail.sys.unknown, args);
  }
  for (std::size_t l = last; l-- > from;) {
    const Level& lv = st.levels[l];
    value = normalize(substitute(*lv.rule, {}, {{lv.next_fn, Lambda{lv.fresh, value}}}));
  }
  return value;
}

/// Rewrites an expression in levels[level].sys.vars back to the input variables.
Expr lift(const CascadeState& st, std::size_t level, Expr e) {
  for (std::size_t l = level; l-- > 0;) {
    const Level& lv = st.levels[l];
    Bindings b;
    for (std::size_t j = 0; j < lv.fresh.size(); ++j) b[lv.fresh[j]] = lv.invariants[j];
    e = substitute(e, b);
  }
  return normalize(e);
}

}  // namespace

GeneralSolution rules_to_solution(const CascadeState& state, const PdeSystem& sys) {
  GeneralSolution out;
  out.trace = state.trace;
  if (state.levels.empty()) {
    std::vector<Expr> args;
    for (const auto& v : sys.vars) args.push_back(Expr::symbol(v));
    out.solution = arbitrary(sys.unknown, args);
    return out;
  }
  out.solution = fold_from(state, 0);
  auto used = arbitrary_functions(out.solution);
  for (const auto& u : state.unsolved) {
    Expr value = fold_from(state, u.level);
    Expr e = substitute_solution(u.eq, state.levels[u.level].sys, value);
    e = lift(state, u.level, e);
    for (const auto& [f, arity] : arbitrary_functions(e)) used.emplace(f, arity);
    out.unsolved.push_back(e);
  }
  for (const auto& name : state.generated) {
    auto it = used.find(name);
    if (it != used.end()) out.arbitrary.push_back({name, it->second});
  }
  return out;
}

GeneralSolution solve_compatible(const PdeSystem& sys, const SolveOptions& opts) {
  NameSupply names(reserved_names(sys));
  CascadeState st = pdes_to_rules(sys, names, opts);
  return rules_to_solution(st, sys);
}

Outcome solve_overdetermined(const PdeSystem& sys, const SolveOptions& opts) {
  Outcome out;
  if (sys.equations.empty()) {
    out.reason = "empty system";
    return out;
  }
  std::size_t rank = jacobian_rank(sys, opts.seed);
  if (rank < sys.m()) {
    out.reason = "rank-deficient: Jacobian in the derivatives has rank " + std::to_string(rank) + " < " +
                 std::to_string(sys.m()) + " equations";
    return out;
  }
  out.compat = complete(sys, opts);
  out.trace = out.compat.trace;
  if (out.compat.verdict == Compat::Incompatible) {
    out.status = Status::Incompatible;
    out.reason = out.compat.reason;
    return out;
  }
  if (out.compat.verdict == Compat::Unsupported) {
    out.reason = out.compat.reason;
    return out;
  }
  GeneralSolution sol = solve_compatible(out.compat.completed, opts);
  out.trace.insert(out.trace.end(), sol.trace.begin(), sol.trace.end());
  out.status = sol.unsolved.empty() ? Status::Solved : Status::PartiallySolved;
  out.solution = std::move(sol);
  return out;
}

}  // namespace mayer
