#include "mayer/single.h"

#include <algorithm>
#include <numeric>

#include "mayer/eval.h"
#include "mayer/print.h"
#include "mayer/rational_nf.h"
#include "mayer/solve.h"
#include "mayer/zero.h"

namespace mayer {

Expr VectorField::apply(const Expr& phi) const {
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    terms.push_back(coeffs[i] * differentiate(phi, vars[i]));
  }
  return add(std::move(terms));
}

std::string NameSupply::fresh(const std::string& stem) {
  int& k = next_[stem];
  std::string name;
  do {
    name = stem + std::to_string(++k);
  } while (taken_.count(name));
  taken_.insert(name);
  return name;
}

std::string NameSupply::function() {
  std::string name;
  do {
    name = "C" + std::to_string(++fn_counter_);
  } while (taken_.count(name));
  taken_.insert(name);
  return name;
}

std::string NameSupply::constant() {
  std::string name;
  do {
    name = "K" + std::to_string(++const_counter_);
  } while (taken_.count(name));
  taken_.insert(name);
  return name;
}

std::size_t gradient_rank(const std::vector<Expr>& fns, const std::vector<std::string>& vars,
                          std::uint64_t seed) {
  if (fns.empty()) return 0;
  std::vector<std::vector<Expr>> grad;
  for (const Expr& f : fns) {
    std::vector<Expr> row;
    for (const auto& v : vars) row.push_back(differentiate(f, v));
    grad.push_back(std::move(row));
  }
  std::vector<Expr> all;
  for (const auto& row : grad) all.insert(all.end(), row.begin(), row.end());
  PointSampler sampler(seed ^ 0x9e3779b97f4a7c15ULL);
  std::size_t best = 0;
  int good = 0;
  for (int attempt = 0; attempt < 80 && good < 2 && best < fns.size(); ++attempt) {
    Point pt = sampler.cover(all);
    for (const auto& v : vars) {
      if (!pt.symbols.count(v)) pt.symbols[v] = sampler.positive_rational();
    }
    try {
      bool exact = true;
      std::vector<std::vector<Value>> vals;
      for (const auto& row : grad) {
        std::vector<Value> r;
        for (const Expr& e : row) {
          r.push_back(eval_at(e, pt));
          exact = exact && r.back().exact;
        }
        vals.push_back(std::move(r));
      }
      std::size_t rank;
      if (exact) {
        RationalMatrix m;
        for (const auto& r : vals) {
          std::vector<Rational> row;
          for (const Value& v : r) row.push_back(v.q);
          m.push_back(std::move(row));
        }
        rank = rref(m, vars.size()).size();
      } else {
        std::vector<std::vector<long double>> m;
        for (const auto& r : vals) {
          std::vector<long double> row;
          for (const Value& v : r) row.push_back(v.as_float());
          m.push_back(std::move(row));
        }
        rank = float_rank(std::move(m));
      }
      ++good;
      best = std::max(best, rank);
    } catch (const EvalError&) {
    } catch (const DivisionByZero&) {
    }
  }
  return best;
}

namespace {

// c1*log(u1) + c2*log(u2) + ... becomes u1^c1 * u2^c2 with the exponents
// scaled to coprime integers; numeric offsets and factors are dropped.
Expr tidy_invariant(const Expr& phi) {
  Expr e = phi;
  if (e.is(Kind::Sum)) {
    std::vector<Expr> kept;
    for (const Expr& t : e.operands())
      if (!t.is_number()) kept.push_back(t);
    e = add(std::move(kept));
  }
  e = split_coefficient(e).second;
  std::vector<Expr> terms = e.is(Kind::Sum) ? e.operands() : std::vector<Expr>{e};
  std::vector<std::pair<Rational, Expr>> logs;
  for (const Expr& t : terms) {
    auto [c, rest] = split_coefficient(t);
    if (!(rest.is(Kind::Function) && rest.head() == Head::Log)) return e;
    logs.emplace_back(c, rest.arg());
  }
  mpz_class l = 1, g = 0;
  for (const auto& [c, u] : logs) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
  }
  Rational scale(l, g);
  scale.canonicalize();
  if (logs.front().first < 0) scale = -scale;
  std::vector<Expr> factors;
  for (const auto& [c, u] : logs) factors.push_back(pow(u, Expr(Rational(c * scale))));
  return normalize(mul(std::move(factors)));
}

class Ladder {
 public:
  Ladder(const VectorField& v, std::size_t needed, const SolveOptions& opts, std::vector<std::string>* trace)
      : v_(v), needed_(needed), opts_(opts), trace_(trace) {
    for (std::size_t i = 0; i < v.vars.size(); ++i) {
      if (zero_like(is_zero(v.coeffs[i], opts.seed))) {
        inactive_.push_back(i);
      } else {
        active_.push_back(i);
      }
    }
  }

  std::vector<Expr> run() {
    for (std::size_t i : inactive_) accept(Expr::symbol(v_.vars[i]), "H1");
    if (done()) return found_;
    scaling();
    for (int pass = 0; pass < 8 && !done(); ++pass) {
      std::size_t before = found_.size();
      bilinear();
      if (!done()) two_variable();
      if (found_.size() == before && !done()) polynomial();
      if (found_.size() == before) break;
    }
    return found_;
  }

 private:
  bool done() const { return found_.size() >= needed_; }

  bool accept(const Expr& candidate, const char* rung) {
    if (done()) return false;
    opts_.check_deadline();
    Expr phi = tidy_invariant(normalize(candidate));
    if (phi.is_number()) return false;
    for (const Expr& f : found_)
      if (f == phi) return false;
    if (!zero_like(is_zero(v_.apply(phi), opts_.seed))) return false;
    std::vector<Expr> trial = found_;
    trial.push_back(phi);
    if (gradient_rank(trial, v_.vars, opts_.seed) != trial.size()) return false;
    found_.push_back(phi);
    if (trace_) trace_->push_back(std::string(rung) + " invariant " + to_string(phi));
    return true;
  }

  Expr var(std::size_t i) const { return Expr::symbol(v_.vars[i]); }

  // H2: a_i = c_i * g * x_i with rational c_i.
  void scaling() {
    if (active_.size() < 2) return;
    std::vector<Expr> ratio;
    for (std::size_t i : active_) ratio.push_back(normalize(v_.coeffs[i] / var(i)));
    std::vector<Rational> c;
    for (const Expr& r : ratio) {
      Expr q = normalize(r / ratio.front());
      if (!q.is_number()) return;
      c.push_back(q.number());
    }
    RationalMatrix m{c};
    for (const auto& alpha : nullspace(m, c.size())) {
      std::vector<Expr> f;
      for (std::size_t k = 0; k < active_.size(); ++k) {
        if (alpha[k] != 0) f.push_back(pow(var(active_[k]), Expr(alpha[k])));
      }
      accept(mul(std::move(f)), "H2");
    }
  }

  bool coefficient_invariant(std::size_t i) {
    auto it = coeff_invariant_.find(i);
    if (it != coeff_invariant_.end()) return it->second;
    bool ok = zero_like(is_zero(v_.apply(v_.coeffs[i]), opts_.seed));
    coeff_invariant_[i] = ok;
    return ok;
  }

  // H3: a_j x_i - a_i x_j when both coefficients are invariants.
  void bilinear() {
    for (std::size_t a = 0; a < active_.size() && !done(); ++a) {
      std::size_t i = active_[a];
      if (!coefficient_invariant(i)) continue;
      for (std::size_t b = a + 1; b < active_.size() && !done(); ++b) {
        std::size_t j = active_[b];
        if (!coefficient_invariant(j)) continue;
        accept(v_.coeffs[j] * var(i) - v_.coeffs[i] * var(j), "H3");
      }
    }
  }

  // H4: dx_j/dx_i = a_j/a_i in two variables, after eliminating other
  // moving variables through invariants already found.
  void two_variable() {
    for (std::size_t a = 0; a < active_.size() && !done(); ++a) {
      for (std::size_t b = 0; b < active_.size() && !done(); ++b) {
        if (a == b) continue;
        std::size_t i = active_[a], j = active_[b];
        if (tried_.count({i, j})) continue;
        tried_.insert({i, j});
        if (auto phi = reduce_pair(i, j)) accept(*phi, "H4");
      }
    }
  }

  std::optional<Expr> reduce_pair(std::size_t i, std::size_t j) {
    Expr r = normalize(v_.coeffs[j] / v_.coeffs[i]);
    const std::string& xi = v_.vars[i];
    const std::string& xj = v_.vars[j];
    Bindings back;
    for (int round = 0; round < 4; ++round) {
      std::vector<std::string> others;
      for (std::size_t k : active_) {
        if (k != i && k != j && contains_symbol(r, v_.vars[k])) others.push_back(v_.vars[k]);
      }
      if (others.empty()) break;
      bool replaced = false;
      for (const auto& w : others) {
        for (const Expr& phi : found_) {
          if (!contains_symbol(phi, w)) continue;
          std::string k = "__k" + std::to_string(back.size());
          auto sol = isolate(phi - Expr::symbol(k), w);
          if (!sol) continue;
          r = normalize(substitute(r, w, *sol));
          back[k] = phi;
          replaced = true;
          break;
        }
        if (replaced) break;
      }
      if (!replaced) return std::nullopt;
    }
    for (std::size_t k : active_) {
      if (k != i && k != j && contains_symbol(r, v_.vars[k])) return std::nullopt;
    }
    std::optional<Expr> phi = separable(r, xi, xj);
    if (!phi) phi = affine(r, xi, xj);
    if (!phi) return std::nullopt;
    return substitute(*phi, back);
  }

  // dx_j/dx_i = f(x_i) g(x_j)
  static std::optional<Expr> separable(const Expr& r, const std::string& xi, const std::string& xj) {
    std::vector<Expr> fs{Expr(1)}, gs{Expr(1)};
    std::vector<Expr> factors = r.is(Kind::Product) ? r.operands() : std::vector<Expr>{r};
    for (const Expr& f : factors) {
      bool di = contains_symbol(f, xi), dj = contains_symbol(f, xj);
      if (di && dj) return std::nullopt;
      (dj ? gs : fs).push_back(f);
    }
    Expr g = mul(std::move(gs));
    auto lhs = integrate_univariate(normalize(pow(g, Expr(-1))), xj);
    if (!lhs) return std::nullopt;
    auto rhs = integrate_univariate(mul(std::move(fs)), xi);
    if (!rhs) return std::nullopt;
    return *lhs - *rhs;
  }

  // dx_j/dx_i = P(x_i) x_j + Q(x_i)
  static std::optional<Expr> affine(const Expr& r, const std::string& xi, const std::string& xj) {
    Expr p = normalize(differentiate(r, xj));
    if (contains_symbol(p, xj)) return std::nullopt;
    Expr q = normalize(r - p * Expr::symbol(xj));
    if (contains_symbol(q, xj)) return std::nullopt;
    auto ip = integrate_univariate(p, xi);
    if (!ip) return std::nullopt;
    Expr mu = exp(-*ip);
    auto iq = integrate_univariate(normalize(q * mu), xi);
    if (!iq) return std::nullopt;
    return Expr::symbol(xj) * mu - *iq;
  }

  // H5: polynomial invariants in the moving variables, degree by degree.
  void polynomial() {
    if (h5_done_) return;
    h5_done_ = true;
    for (std::size_t i : active_) {
      if (!to_rational_nf(v_.coeffs[i])) return;
    }
    std::size_t k = active_.size();
    for (int d = 1; d <= opts_.degree && !done(); ++d) {
      std::vector<std::vector<int>> monos;
      std::vector<int> alpha(k, 0);
      std::function<void(std::size_t, int)> gen = [&](std::size_t pos, int left) {
        if (pos == k) {
          if (std::accumulate(alpha.begin(), alpha.end(), 0) > 0) monos.push_back(alpha);
          return;
        }
        for (int e = 0; e <= left; ++e) {
          alpha[pos] = e;
          gen(pos + 1, left - e);
        }
        alpha[pos] = 0;
      };
      gen(0, d);
      std::vector<Expr> mono_exprs, images;
      for (const auto& a : monos) {
        std::vector<Expr> f;
        for (std::size_t t = 0; t < k; ++t)
          if (a[t]) f.push_back(pow(var(active_[t]), Expr(a[t])));
        mono_exprs.push_back(mul(std::move(f)));
        images.push_back(v_.apply(mono_exprs.back()));
      }
      opts_.check_deadline();
      KernelTable table;
      for (const Expr& e : images) table.scan(e);
      std::vector<RationalNF> nf;
      for (const Expr& e : images) nf.push_back(table.convert(e));
      Poly l = Poly::constant(table.nvars(), 1);
      for (const auto& f : nf) {
        if (f.is_zero()) continue;
        Poly g = gcd(l, f.denominator);
        l = l * *divide_exact(f.denominator, g);
      }
      std::map<std::vector<int>, std::size_t> row_of;
      RationalMatrix m;
      for (std::size_t c = 0; c < nf.size(); ++c) {
        if (nf[c].is_zero()) continue;
        Poly scaled = nf[c].numerator * *divide_exact(l, nf[c].denominator);
        for (const Term& t : scaled.terms()) {
          auto [it, fresh] = row_of.emplace(t.exps, m.size());
          if (fresh) m.emplace_back(nf.size(), Rational(0));
          m[it->second][c] += t.coeff;
        }
      }
      for (const auto& v : nullspace(m, nf.size())) {
        std::vector<Expr> terms;
        for (std::size_t c = 0; c < v.size(); ++c)
          if (v[c] != 0) terms.push_back(Expr(v[c]) * mono_exprs[c]);
        accept(add(std::move(terms)), "H5");
        if (done()) break;
      }
    }
  }

  const VectorField& v_;
  std::size_t needed_;
  const SolveOptions& opts_;
  std::vector<std::string>* trace_;
  std::vector<std::size_t> active_, inactive_;
  std::vector<Expr> found_;
  std::map<std::size_t, bool> coeff_invariant_;
  std::set<std::pair<std::size_t, std::size_t>> tried_;
  bool h5_done_ = false;
};

}  // namespace

std::vector<Expr> first_integrals(const VectorField& v, std::size_t needed, const SolveOptions& opts,
                                  std::vector<std::string>* trace) {
  return Ladder(v, needed, opts, trace).run();
}

namespace {

constexpr const char* kPlaceholder = "__F";

Expr rename_function(const Expr& e, const std::string& name) {
  ExprMap<Expr> rules;
  visit(e, [&](const Expr& s) {
    if (s.is(Kind::Arbitrary) && s.name() == kPlaceholder) rules[s] = arbitrary(name, s.operands());
    return true;
  });
  return replace_all(e, rules);
}

}  // namespace

std::optional<SingleSolution> solve_single_pde(const Expr& eq, const PdeSystem& sys, NameSupply& names,
                                               const SolveOptions& opts) {
  KernelTable t;
  t.scan(eq);
  Poly num = t.convert(eq).numerator;
  std::vector<int> pidx;
  for (std::size_t i = 0; i < sys.n(); ++i) {
    int idx = t.index_of(sys.p(i));
    if (idx >= 0 && (!t.variable_expr(idx).is(Kind::Symbol) || t.variables_mentioning({sys.p_name(i)}).size() != 1)) {
      return std::nullopt;
    }
    pidx.push_back(idx);
  }
  // Split the numerator into sum_i a_i p_i + c; any product of derivatives
  // makes the equation nonlinear.
  std::vector<std::vector<Term>> parts(sys.n() + 1);
  for (const Term& term : num.terms()) {
    int deg = 0;
    std::size_t which = sys.n();
    for (std::size_t i = 0; i < sys.n(); ++i) {
      if (pidx[i] < 0) continue;
      int ex = term.exps[static_cast<std::size_t>(pidx[i])];
      deg += ex;
      if (ex) which = i;
    }
    if (deg > 1) return std::nullopt;
    Term copy = term;
    if (which < sys.n()) copy.exps[static_cast<std::size_t>(pidx[which])] = 0;
    parts[which].push_back(std::move(copy));
  }
  std::vector<Expr> a;
  for (auto& p : parts) a.push_back(t.to_expr(Poly::from_terms(t.nvars(), std::move(p))));
  Expr c = a.back();
  a.pop_back();

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < sys.n(); ++i)
    if (!a[i].is_zero()) active.push_back(i);
  if (active.empty()) return std::nullopt;
  bool zdep = !c.is_zero();
  for (const Expr& ai : a) zdep = zdep || contains_symbol(ai, sys.unknown);

  SingleSolution out;
  std::optional<Expr> value;
  auto others_except = [&](std::size_t skip) {
    std::vector<Expr> v;
    for (std::size_t k = 0; k < sys.n(); ++k)
      if (k != skip) v.push_back(Expr::symbol(sys.vars[k]));
    return v;
  };

  if (active.size() == 1) {
    std::size_t i = active[0];
    Expr g = normalize(-c / a[i]);
    if (!contains_symbol(g, sys.unknown)) {
      if (auto prim = integrate_univariate(g, sys.vars[i])) {
        out.invariants = others_except(i);
        value = *prim + arbitrary(kPlaceholder, out.invariants);
        out.notes.push_back("direct integration in " + sys.vars[i]);
      }
    } else {
      // dz/dx_i = g(x_i, z) with the other variables as parameters.
      VectorField v{{sys.vars[i], sys.unknown}, {Expr(1), g}};
      auto ints = first_integrals(v, 1, opts);
      if (!ints.empty() && contains_symbol(ints[0], sys.unknown)) {
        out.invariants = others_except(i);
        std::vector<std::string> notes;
        value = isolate(ints[0] - arbitrary(kPlaceholder, out.invariants), sys.unknown, &notes);
        if (value) {
          out.notes = notes;
          out.notes.push_back("separable semilinear reduction in " + sys.vars[i]);
        }
      }
    }
  }

  if (!value) {
    VectorField v{sys.vars, a};
    std::size_t needed = sys.n() - 1;
    if (zdep) {
      v.vars.push_back(sys.unknown);
      v.coeffs.push_back(normalize(-c));
      needed = sys.n();
    }
    std::vector<std::string> notes;
    auto ints = first_integrals(v, needed, opts, &notes);
    if (ints.size() < needed) return std::nullopt;
    std::vector<Expr> zfree, zbound;
    for (const Expr& phi : ints) (contains_symbol(phi, sys.unknown) ? zbound : zfree).push_back(phi);
    out.notes = notes;
    if (!zdep) {
      out.invariants = ints;
      value = arbitrary(kPlaceholder, ints);
    } else {
      if (zbound.size() != 1) return std::nullopt;
      out.invariants = zfree;
      value = isolate(zbound[0] - arbitrary(kPlaceholder, zfree), sys.unknown, &out.notes);
      if (!value) return std::nullopt;
    }
  }
  if (!value) return std::nullopt;
  opts.check_deadline();
  if (!zero_like(is_zero(substitute_solution(eq, sys, *value), opts.seed))) return std::nullopt;
  out.new_fn = names.function();
  out.expression = rename_function(*value, out.new_fn);
  return out;
}

std::optional<Expr> integrate_exact_form(const std::map<std::string, Expr>& pivots, const PdeSystem& sys,
                                         NameSupply& names, const SolveOptions& opts) {
  Expr z(0);
  for (std::size_t i = 0; i < sys.n(); ++i) {
    auto it = pivots.find(sys.p_name(i));
    if (it == pivots.end()) return std::nullopt;
    if (contains_symbol(it->second, sys.unknown) || contains_derivative(it->second, sys)) return std::nullopt;
    Expr r = normalize(it->second - differentiate(z, sys.vars[i]));
    if (zero_like(is_zero(r, opts.seed))) continue;
    auto prim = integrate_univariate(r, sys.vars[i]);
    if (!prim) return std::nullopt;
    z = z + *prim;
  }
  for (std::size_t i = 0; i < sys.n(); ++i) {
    Expr r = differentiate(z, sys.vars[i]) - pivots.at(sys.p_name(i));
    if (!zero_like(is_zero(r, opts.seed))) return std::nullopt;
  }
  return z + arbitrary(names.constant(), {});
}

}  // namespace mayer
