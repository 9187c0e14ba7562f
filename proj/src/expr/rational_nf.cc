#include "mayer/rational_nf.h"

#include <numeric>
#include <stdexcept>

namespace mayer {

namespace {

Poly must_divide(const Poly& a, const Poly& b) {
  auto q = divide_exact(a, b);
  if (!q) throw std::logic_error("inexact division by gcd");
  return *q;
}

// Makes the denominator monic, moving the scale into the numerator.
RationalNF make_monic(Poly num, Poly den) {
  if (den.is_zero()) throw DivisionByZero("rational function with zero denominator");
  if (num.is_zero()) return RationalNF{Poly(num.nvars()), Poly::constant(num.nvars(), 1)};
  Rational lc = den.leading_numeric();
  if (lc != 1) {
    num = num.scaled(1 / lc);
    den = den.scaled(1 / lc);
  }
  return RationalNF{std::move(num), std::move(den)};
}

RationalNF reduce(Poly num, Poly den) {
  if (num.is_zero()) return make_monic(std::move(num), std::move(den));
  if (!den.is_constant()) {
    Poly g = gcd(num, den);
    if (!g.is_constant()) {
      num = must_divide(num, g);
      den = must_divide(den, g);
    }
  }
  return make_monic(std::move(num), std::move(den));
}

bool kernel_kind(const Expr& e) {
  switch (e.kind()) {
    case Kind::Symbol:
    case Kind::Function:
    case Kind::Arbitrary:
    case Kind::SlotDerivative:
      return true;
    case Kind::Power:
      return !e.exponent().is_number();
    default:
      return false;
  }
}

}  // namespace

RationalNF RationalNF::constant(int nvars, const Rational& c) {
  return RationalNF{Poly::constant(nvars, c), Poly::constant(nvars, 1)};
}

RationalNF RationalNF::from_poly(Poly p) {
  int n = p.nvars();
  return RationalNF{std::move(p), Poly::constant(n, 1)};
}

RationalNF RationalNF::operator+(const RationalNF& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (denominator == o.denominator) {
    return reduce(numerator + o.numerator, denominator);
  }
  if (denominator.is_one()) return reduce(numerator * o.denominator + o.numerator, o.denominator);
  if (o.denominator.is_one()) return reduce(numerator + o.numerator * denominator, denominator);
  Poly g = gcd(denominator, o.denominator);
  Poly a = g.is_constant() ? o.denominator : must_divide(o.denominator, g);
  Poly b = g.is_constant() ? denominator : must_divide(denominator, g);
  return reduce(numerator * a + o.numerator * b, denominator * a);
}

RationalNF RationalNF::operator-() const { return RationalNF{-numerator, denominator}; }

RationalNF RationalNF::operator-(const RationalNF& o) const { return *this + (-o); }

RationalNF RationalNF::operator*(const RationalNF& o) const {
  if (is_zero() || o.is_zero()) return constant(numerator.nvars(), 0);
  Poly g1 = gcd(numerator, o.denominator);
  Poly g2 = gcd(o.numerator, denominator);
  Poly n1 = g1.is_constant() ? numerator : must_divide(numerator, g1);
  Poly d2 = g1.is_constant() ? o.denominator : must_divide(o.denominator, g1);
  Poly n2 = g2.is_constant() ? o.numerator : must_divide(o.numerator, g2);
  Poly d1 = g2.is_constant() ? denominator : must_divide(denominator, g2);
  return make_monic(n1 * n2, d1 * d2);
}

RationalNF RationalNF::operator/(const RationalNF& o) const {
  if (o.is_zero()) throw DivisionByZero("division by zero rational function");
  return *this * RationalNF{o.denominator, o.numerator};
}

RationalNF RationalNF::pow(long e) const {
  if (e == 0) return constant(numerator.nvars(), 1);
  if (e < 0) {
    if (is_zero()) throw DivisionByZero("zero to a negative power");
    return make_monic(denominator.pow(static_cast<unsigned>(-e)), numerator.pow(static_cast<unsigned>(-e)));
  }
  return RationalNF{numerator.pow(static_cast<unsigned>(e)), denominator.pow(static_cast<unsigned>(e))};
}

Expr KernelTable::normalized_kernel(const Expr& e) {
  return map_children(e, [](const Expr& c) { return normalize(c); });
}

const Expr& KernelTable::cached_normal(const Expr& e) {
  auto it = normal_cache_.find(e.id());
  if (it != normal_cache_.end()) return it->second;
  Expr n = e.is(Kind::Symbol) ? e : normalize(e);
  keep_.push_back(e);
  return normal_cache_.emplace(e.id(), n).first->second;
}

void KernelTable::scan(const Expr& e) {
  if (frozen_) throw std::logic_error("KernelTable::scan after conversion");
  switch (e.kind()) {
    case Kind::Number:
      return;
    case Kind::Symbol:
      kernels_.insert(e);
      return;
    case Kind::Sum:
    case Kind::Product:
      for (const Expr& op : e.operands()) scan(op);
      return;
    case Kind::Power:
      if (e.exponent().is_integer()) {
        scan(e.base());
        return;
      }
      if (e.exponent().is_number()) {
        const Expr& key = cached_normal(e.base());
        auto& r = radicals_[key];
        r.base = key;
        long den = e.exponent().number().get_den().get_si();
        r.lcm = std::lcm(r.lcm, den);
        if (kernel_kind(key)) kernels_.insert(key);
        return;
      }
      [[fallthrough]];
    default: {
      auto it = normal_cache_.find(e.id());
      if (it == normal_cache_.end()) {
        Expr nk = normalized_kernel(e);
        keep_.push_back(e);
        it = normal_cache_.emplace(e.id(), nk).first;
      }
      const Expr& nk = it->second;
      if (kernel_kind(nk)) {
        kernels_.insert(nk);
      } else {
        scan(nk);
      }
      return;
    }
  }
}

void KernelTable::freeze() {
  if (frozen_) return;
  frozen_ = true;
  for (const Expr& k : kernels_) {
    long root = 1;
    auto it = radicals_.find(k);
    if (it != radicals_.end()) root = it->second.lcm;
    index_[k] = static_cast<int>(var_exprs_.size());
    var_exprs_.push_back(k);
    var_root_.push_back(root);
  }
  for (const auto& [key, r] : radicals_) {
    if (index_.count(key)) continue;
    index_[key] = static_cast<int>(var_exprs_.size());
    var_exprs_.push_back(key);
    var_root_.push_back(r.lcm);
  }
}

int KernelTable::nvars() {
  freeze();
  return static_cast<int>(var_exprs_.size());
}

int KernelTable::index_of(const Expr& kernel) {
  freeze();
  auto it = index_.find(kernel);
  return it == index_.end() ? -1 : it->second;
}

Expr KernelTable::variable_expr(int index) {
  freeze();
  auto i = static_cast<std::size_t>(index);
  if (var_root_[i] == 1) return var_exprs_[i];
  return pow(var_exprs_[i], Expr(Rational(1, var_root_[i])));
}

bool KernelTable::purely_rational() {
  freeze();
  for (std::size_t i = 0; i < var_exprs_.size(); ++i) {
    if (!var_exprs_[i].is(Kind::Symbol) || var_root_[i] != 1) return false;
  }
  return true;
}

std::vector<int> KernelTable::variables_mentioning(const std::set<std::string>& names) {
  freeze();
  std::vector<int> out;
  for (std::size_t i = 0; i < var_exprs_.size(); ++i) {
    if (contains_any_symbol(var_exprs_[i], names)) out.push_back(static_cast<int>(i));
  }
  return out;
}

RationalNF KernelTable::convert(const Expr& e) {
  freeze();
  int n = static_cast<int>(var_exprs_.size());
  auto var_power = [&](int idx, long k) {
    if (k >= 0) return RationalNF::from_poly(Poly::variable(n, idx, static_cast<int>(k)));
    return RationalNF::from_poly(Poly::variable(n, idx, static_cast<int>(-k))).pow(-1);
  };
  switch (e.kind()) {
    case Kind::Number:
      return RationalNF::constant(n, e.number());
    case Kind::Symbol: {
      int idx = index_.at(e);
      return var_power(idx, var_root_[static_cast<std::size_t>(idx)]);
    }
    case Kind::Sum: {
      RationalNF acc = RationalNF::constant(n, 0);
      for (const Expr& t : e.operands()) acc = acc + convert(t);
      return acc;
    }
    case Kind::Product: {
      RationalNF acc = RationalNF::constant(n, 1);
      for (const Expr& f : e.operands()) acc = acc * convert(f);
      return acc;
    }
    case Kind::Power:
      if (e.exponent().is_integer()) {
        return convert(e.base()).pow(e.exponent().number().get_num().get_si());
      }
      if (e.exponent().is_number()) {
        const Expr& key = cached_normal(e.base());
        int idx = index_.at(key);
        long root = var_root_[static_cast<std::size_t>(idx)];
        const Rational& q = e.exponent().number();
        long k = q.get_num().get_si() * (root / q.get_den().get_si());
        return var_power(idx, k);
      }
      [[fallthrough]];
    default: {
      const Expr& nk = normal_cache_.at(e.id());
      if (!kernel_kind(nk)) return convert(nk);
      int idx = index_.at(nk);
      return var_power(idx, var_root_[static_cast<std::size_t>(idx)]);
    }
  }
}

Expr KernelTable::to_expr(const Poly& p) {
  freeze();
  std::vector<Expr> terms;
  terms.reserve(p.term_count());
  for (const Term& t : p.terms()) {
    std::vector<Expr> fs{Expr(t.coeff)};
    for (std::size_t v = 0; v < t.exps.size(); ++v) {
      if (t.exps[v] == 0) continue;
      fs.push_back(pow(var_exprs_[v], Expr(rational(t.exps[v], var_root_[v]))));
    }
    terms.push_back(mul(std::move(fs)));
  }
  return add(std::move(terms));
}

Expr KernelTable::to_expr(const RationalNF& f) {
  Expr num = to_expr(f.numerator);
  if (f.denominator.is_one()) return num;
  return mul({num, pow(to_expr(f.denominator), Expr(-1))});
}

std::optional<RationalForm> to_rational_nf(const Expr& e) {
  bool ok = true;
  visit(e, [&](const Expr& s) {
    if (!ok) return false;
    if (s.is(Kind::Function) || s.is(Kind::Arbitrary) || s.is(Kind::SlotDerivative)) ok = false;
    if (s.is(Kind::Power) && !s.exponent().is_integer()) ok = false;
    return ok;
  });
  if (!ok) return std::nullopt;
  KernelTable t;
  t.scan(e);
  RationalForm out{t.convert(e), {}};
  for (int i = 0; i < t.nvars(); ++i) out.variables.push_back(t.variable_expr(i).name());
  return out;
}

namespace {

bool has_radical(const Expr& e) {
  bool found = false;
  visit(e, [&](const Expr& s) {
    if (found) return false;
    if (s.is(Kind::Power) && s.exponent().is_number() && !s.exponent().is_integer()) found = true;
    return !found;
  });
  return found;
}

bool rational_root(const Rational& q, int r, Rational& out) {
  mpz_class n, d;
  if (q < 0 && r % 2 == 0) return false;
  mpz_class an = abs(q.get_num());
  if (!mpz_root(n.get_mpz_t(), an.get_mpz_t(), static_cast<unsigned long>(r))) return false;
  if (!mpz_root(d.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(r))) return false;
  out = Rational(q < 0 ? mpz_class(-n) : n, d);
  out.canonicalize();
  return true;
}

/// Exact r-th root of a polynomial, term by term from the leading one.
std::optional<Poly> poly_root(const Poly& p, int r) {
  if (p.is_zero() || p.term_count() < 2) return std::nullopt;
  const Term& lead = p.terms().front();
  Term r0{lead.exps, 0};
  for (auto& x : r0.exps) {
    if (x % r) return std::nullopt;
    x /= r;
  }
  if (!rational_root(lead.coeff, r, r0.coeff)) return std::nullopt;
  int n = p.nvars();
  Poly root = Poly::from_terms(n, {r0});
  Poly scale = root.pow(static_cast<unsigned>(r - 1)).scaled(r);
  const Term& s = scale.terms().front();
  for (std::size_t it = 0; it <= p.term_count() + 1; ++it) {
    Poly rem = p - root.pow(static_cast<unsigned>(r));
    if (rem.is_zero()) return root;
    Term next = rem.terms().front();
    for (std::size_t v = 0; v < next.exps.size(); ++v) {
      next.exps[v] -= s.exps[v];
      if (next.exps[v] < 0) return std::nullopt;
    }
    next.coeff /= s.coeff;
    root = root + Poly::from_terms(n, {next});
  }
  return std::nullopt;
}

/// (Q^r)^(a/b) -> Q^(r a/b) for odd r dividing b, when the base is a
/// polynomial that is an exact r-th power.
Expr extract_powers(const Expr& e) {
  if (!has_radical(e)) return e;
  Expr m = map_children(e, extract_powers);
  if (!m.is(Kind::Power) || !m.base().is(Kind::Sum) || !m.exponent().is_number()) return m;
  long b = m.exponent().number().get_den().get_si();
  if (b == 1) return m;
  auto form = to_rational_nf(m.base());
  if (!form || !form->nf.denominator.is_constant()) return m;
  for (long r = b; r >= 3; --r) {
    if (b % r || r % 2 == 0) continue;
    auto root = poly_root(form->nf.numerator, static_cast<int>(r));
    if (!root) continue;
    Rational c = form->nf.denominator.terms().front().coeff, cr;
    if (!rational_root(c, static_cast<int>(r), cr)) continue;
    KernelTable t;
    t.scan(m.base());
    Expr q = t.to_expr(*root) / Expr(cr);
    return pow(q, Expr(Rational(m.exponent().number() * r)));
  }
  return m;
}

Expr normalize_once(const Expr& e) {
  KernelTable t;
  t.scan(e);
  return t.to_expr(t.convert(e));
}

}  // namespace

Expr normalize(const Expr& e) {
  if (e.is_number() || e.is(Kind::Symbol)) return e;
  Expr cur = normalize_once(e);
  if (!has_radical(cur)) return cur;
  cur = normalize_once(extract_powers(cur));
  for (int i = 0; i < 4; ++i) {
    Expr next = normalize_once(cur);
    if (next == cur) break;
    cur = next;
  }
  return cur;
}

Poly primitive_integer(const Poly& p) {
  if (p.is_zero()) return p;
  mpz_class l = 1, g = 0;
  for (const Term& t : p.terms()) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
  }
  Rational s(l, g);
  s.canonicalize();
  if (p.leading_numeric() < 0) s = -s;
  return p.scaled(s);
}

Expr equation_numerator(const Expr& e) {
  KernelTable t;
  t.scan(e);
  RationalNF f = t.convert(e);
  return t.to_expr(primitive_integer(f.numerator));
}

Expr strip_content(const Expr& e, const std::function<bool(const Expr&)>& keep) {
  KernelTable t;
  t.scan(e);
  RationalNF f = t.convert(e);
  if (f.is_zero()) return Expr(0);
  std::vector<int> main;
  for (int i = 0; i < t.nvars(); ++i) {
    if (keep(t.variable_expr(i))) main.push_back(i);
  }
  Poly num = f.numerator;
  if (!main.empty()) {
    Poly c = content_over(num, main);
    if (!c.is_constant()) num = must_divide(num, c);
  }
  return t.to_expr(primitive_integer(num));
}

}  // namespace mayer
