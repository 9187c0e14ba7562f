#include "mayer/solve.h"

#include <algorithm>
#include <cmath>

#include "mayer/print.h"
#include "mayer/rational_nf.h"
#include "mayer/zero.h"

namespace mayer {

namespace {

std::optional<Expr> invert_kernel(const Expr& k, const Expr& value, const std::string& target,
                                  std::vector<std::string>* notes) {
  switch (k.kind()) {
    case Kind::Symbol:
      return k.name() == target ? std::optional<Expr>(value) : std::nullopt;
    case Kind::Power: {
      const Expr& x = k.exponent();
      if (x.is_number()) {
        // b^x = v  =>  b = v^(1/x)
        Rational inv = 1 / x.number();
        if (notes && inv.get_den() == 1 && inv.get_num() % 2 == 0) {
          notes->push_back("even power inverted on the principal branch for " + target);
        }
        return isolate(k.base() - pow(value, Expr(inv)), target, notes);
      }
      if (!contains_symbol(k.base(), target)) {
        return isolate(x - log(value) / log(k.base()), target, notes);
      }
      return std::nullopt;
    }
    case Kind::Function:
      switch (k.head()) {
        case Head::Exp:
          return isolate(k.arg() - log(value), target, notes);
        case Head::Log:
          return isolate(k.arg() - exp(value), target, notes);
        default:
          return std::nullopt;
      }
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<Expr> isolate(const Expr& eq, const std::string& target, std::vector<std::string>* notes) {
  if (!contains_symbol(eq, target)) return std::nullopt;
  try {
    KernelTable t;
    t.scan(eq);
    RationalNF f = t.convert(eq);
    std::vector<int> vs = t.variables_mentioning({target});
    if (vs.size() != 1) return std::nullopt;
    int v = vs[0];
    std::vector<Poly> c = f.numerator.coefficients(v);
    int d = static_cast<int>(c.size()) - 1;
    if (d < 1) return std::nullopt;
    auto E = [&](const Poly& p) { return t.to_expr(p); };
    bool pure = true;
    for (int i = 1; i < d; ++i) pure = pure && c[static_cast<std::size_t>(i)].is_zero();
    Expr value;
    if (d == 1) {
      value = -E(c[0]) / E(c[1]);
    } else if (pure) {
      value = pow(-E(c[0]) / E(c[static_cast<std::size_t>(d)]), Expr(rational(1, d)));
      if (notes && d % 2 == 0) notes->push_back("principal root taken when solving for " + target);
    } else if (d == 2) {
      Expr a = E(c[2]), b = E(c[1]), cc = E(c[0]);
      value = (-b + sqrt(b * b - Expr(4) * a * cc)) / (Expr(2) * a);
      if (notes) notes->push_back("principal branch of the quadratic taken when solving for " + target);
    } else {
      return std::nullopt;
    }
    auto r = invert_kernel(t.variable_expr(v), value, target, notes);
    if (!r) return std::nullopt;
    Expr out = normalize(*r);
    if (contains_symbol(out, target)) return std::nullopt;
    if (!zero_like(is_zero(substitute(eq, target, out)))) return std::nullopt;
    return out;
  } catch (const DivisionByZero&) {
    return std::nullopt;
  }
}

std::optional<std::map<std::string, Expr>> solve_linear(const std::vector<Expr>& eqs,
                                                        const std::vector<std::string>& targets) {
  KernelTable t;
  for (const Expr& e : eqs) t.scan(e);
  std::vector<int> cols;
  for (const auto& name : targets) {
    int idx = t.index_of(Expr::symbol(name));
    if (idx < 0 || !t.variable_expr(idx).is(Kind::Symbol)) return std::nullopt;
    if (t.variables_mentioning({name}).size() != 1) return std::nullopt;
    cols.push_back(idx);
  }
  int n = t.nvars();
  std::size_t k = cols.size();
  // Row layout: coefficients of each target, then the constant part.
  std::vector<std::vector<RationalNF>> rows;
  for (const Expr& e : eqs) {
    Poly num = t.convert(e).numerator;
    std::vector<std::vector<Term>> parts(k + 1);
    for (const Term& term : num.terms()) {
      int deg = 0;
      std::size_t which = k;
      for (std::size_t j = 0; j < k; ++j) {
        int ex = term.exps[static_cast<std::size_t>(cols[j])];
        deg += ex;
        if (ex == 1) which = j;
      }
      if (deg > 1) return std::nullopt;
      Term copy = term;
      if (which < k) copy.exps[static_cast<std::size_t>(cols[which])] = 0;
      parts[which].push_back(std::move(copy));
    }
    std::vector<RationalNF> row;
    for (auto& p : parts) row.push_back(RationalNF::from_poly(Poly::from_terms(n, std::move(p))));
    rows.push_back(std::move(row));
  }

  auto weight = [](const RationalNF& f) { return f.numerator.term_count() + f.denominator.term_count(); };
  std::vector<int> pivot_row(k, -1);
  std::vector<bool> used(rows.size(), false);
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t best_r = rows.size(), best_c = k, best_w = 0;
    for (std::size_t c = 0; c < k; ++c) {
      if (pivot_row[c] >= 0) continue;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (used[r] || rows[r][c].is_zero()) continue;
        std::size_t w = weight(rows[r][c]);
        if (best_r == rows.size() || w < best_w) {
          best_r = r;
          best_c = c;
          best_w = w;
        }
      }
    }
    if (best_r == rows.size()) return std::nullopt;
    used[best_r] = true;
    pivot_row[best_c] = static_cast<int>(best_r);
    RationalNF inv = RationalNF::constant(n, 1) / rows[best_r][best_c];
    for (auto& x : rows[best_r]) x = x * inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == best_r || rows[r][best_c].is_zero()) continue;
      RationalNF factor = rows[r][best_c];
      for (std::size_t c = 0; c <= k; ++c) rows[r][c] = rows[r][c] - factor * rows[best_r][c];
    }
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!used[r] && !rows[r][k].is_zero()) return std::nullopt;
  }
  std::map<std::string, Expr> out;
  for (std::size_t c = 0; c < k; ++c) {
    out[targets[c]] = t.to_expr(-rows[static_cast<std::size_t>(pivot_row[c])][k]);
  }
  return out;
}

std::size_t float_rank(std::vector<std::vector<long double>> m) {
  long double scale = 0;
  for (const auto& row : m)
    for (long double x : row) scale = std::max(scale, std::fabs(x));
  if (scale == 0) return 0;
  long double tol = 1e-9L * scale;
  std::size_t rank = 0;
  std::size_t cols = m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    for (std::size_t r = rank; r < m.size(); ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[p][c])) p = r;
    if (std::fabs(m[p][c]) <= tol) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      long double f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::vector<std::size_t> rref(RationalMatrix& m, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t p = row;
    while (p < m.size() && m[p][col] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t c = col; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<std::vector<Rational>> nullspace(RationalMatrix m, std::size_t ncols) {
  auto pivots = rref(m, ncols);
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(ncols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace mayer
