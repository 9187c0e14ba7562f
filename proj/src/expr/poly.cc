#include "mayer/poly.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mayer {

namespace {

bool lex_greater(const Term& a, const Term& b) { return a.exps > b.exps; }

Exponents zero_exps(int n) { return Exponents(static_cast<std::size_t>(n), 0); }

}  // namespace

Poly Poly::constant(int nvars, const Rational& c) {
  Poly p(nvars);
  if (c != 0) p.terms_.push_back({zero_exps(nvars), c});
  return p;
}

Poly Poly::variable(int nvars, int index, int power) {
  Poly p(nvars);
  Exponents e = zero_exps(nvars);
  e[static_cast<std::size_t>(index)] = power;
  p.terms_.push_back({std::move(e), Rational(1)});
  return p;
}

Poly Poly::from_terms(int nvars, std::vector<Term> terms) {
  Poly p(nvars);
  p.combine_sorted_unsorted(terms);
  return p;
}

void Poly::combine_sorted_unsorted(std::vector<Term>& raw) {
  std::sort(raw.begin(), raw.end(), lex_greater);
  terms_.clear();
  for (auto& t : raw) {
    if (!terms_.empty() && terms_.back().exps == t.exps) {
      terms_.back().coeff += t.coeff;
      if (terms_.back().coeff == 0) terms_.pop_back();
    } else if (t.coeff != 0) {
      terms_.push_back(std::move(t));
    }
  }
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  for (int e : terms_[0].exps) {
    if (e != 0) return false;
  }
  return true;
}

bool Poly::is_one() const { return is_constant() && !terms_.empty() && terms_[0].coeff == 1; }

int Poly::degree(int var) const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const Term& t : terms_) d = std::max(d, t.exps[static_cast<std::size_t>(var)]);
  return d;
}

int Poly::total_degree() const {
  int d = terms_.empty() ? -1 : 0;
  for (const Term& t : terms_) {
    int s = 0;
    for (int e : t.exps) s += e;
    d = std::max(d, s);
  }
  return d;
}

bool Poly::uses(int var) const {
  for (const Term& t : terms_) {
    if (t.exps[static_cast<std::size_t>(var)] != 0) return true;
  }
  return false;
}

std::vector<bool> Poly::used_vars() const {
  std::vector<bool> used(static_cast<std::size_t>(nvars_), false);
  for (const Term& t : terms_) {
    for (std::size_t i = 0; i < t.exps.size(); ++i) {
      if (t.exps[i] != 0) used[i] = true;
    }
  }
  return used;
}

std::vector<Poly> Poly::coefficients(int var) const {
  int d = degree(var);
  std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(std::max(d + 1, 0)));
  for (const Term& t : terms_) {
    Term c = t;
    int k = c.exps[static_cast<std::size_t>(var)];
    c.exps[static_cast<std::size_t>(var)] = 0;
    buckets[static_cast<std::size_t>(k)].push_back(std::move(c));
  }
  std::vector<Poly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) {
    Poly p(nvars_);
    // Removing one variable from a lex-sorted list can break the order.
    p.combine_sorted_unsorted(b);
    out.push_back(std::move(p));
  }
  return out;
}

Poly Poly::leading_coefficient(int var) const {
  int d = degree(var);
  std::vector<Term> raw;
  for (const Term& t : terms_) {
    if (t.exps[static_cast<std::size_t>(var)] == d) {
      Term c = t;
      c.exps[static_cast<std::size_t>(var)] = 0;
      raw.push_back(std::move(c));
    }
  }
  Poly p(nvars_);
  p.combine_sorted_unsorted(raw);
  return p;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r(nvars_);
  r.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j >= o.terms_.size() || (i < terms_.size() && terms_[i].exps > o.terms_[j].exps)) {
      r.terms_.push_back(terms_[i++]);
    } else if (i >= terms_.size() || o.terms_[j].exps > terms_[i].exps) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      Rational c = terms_[i].coeff + o.terms_[j].coeff;
      if (c != 0) r.terms_.push_back({terms_[i].exps, c});
      ++i;
      ++j;
    }
  }
  return r;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (Term& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::scaled(const Rational& c) const {
  if (c == 0) return Poly(nvars_);
  Poly r = *this;
  for (Term& t : r.terms_) t.coeff *= c;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return Poly(nvars_);
  if (o.is_constant()) return scaled(o.terms_[0].coeff);
  if (is_constant()) return o.scaled(terms_[0].coeff);
  std::map<Exponents, Rational, std::greater<>> acc;
  Exponents e(static_cast<std::size_t>(nvars_));
  for (const Term& a : terms_) {
    for (const Term& b : o.terms_) {
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = a.exps[k] + b.exps[k];
      auto it = acc.find(e);
      if (it == acc.end()) {
        acc.emplace(e, a.coeff * b.coeff);
      } else {
        it->second += a.coeff * b.coeff;
      }
    }
  }
  Poly r(nvars_);
  r.terms_.reserve(acc.size());
  for (auto& [ex, c] : acc) {
    if (c != 0) r.terms_.push_back({ex, c});
  }
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly result = constant(nvars_, 1);
  Poly base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e) base = base * base;
  }
  return result;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  Rational lc = leading_numeric();
  if (lc == 1) return *this;
  return scaled(1 / lc);
}

Poly Poly::shifted(int var, int k) const {
  Poly r = *this;
  for (Term& t : r.terms_) t.exps[static_cast<std::size_t>(var)] += k;
  return r;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exps != b.terms_[i].exps || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  int n = a.nvars();
  if (a.is_zero()) return Poly(n);
  if (b.is_constant()) return a.scaled(1 / b.terms()[0].coeff);
  std::vector<Term> quotient;
  Poly r = a;
  const Term& lb = b.terms().front();
  while (!r.is_zero()) {
    const Term& lr = r.terms().front();
    Term t{Exponents(static_cast<std::size_t>(n)), lr.coeff / lb.coeff};
    for (std::size_t k = 0; k < t.exps.size(); ++k) {
      t.exps[k] = lr.exps[k] - lb.exps[k];
      if (t.exps[k] < 0) return std::nullopt;
    }
    Poly step = Poly::from_terms(n, {t});
    quotient.push_back(t);
    r = r - step * b;
  }
  return Poly::from_terms(n, std::move(quotient));
}

namespace {

Poly must_divide(const Poly& a, const Poly& b) {
  auto q = divide_exact(a, b);
  if (!q) throw std::logic_error("inexact polynomial division in gcd");
  return *q;
}

Poly monomial_gcd(const Poly& mono, const Poly& other) {
  Exponents e = mono.terms().front().exps;
  for (const Term& t : other.terms()) {
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = std::min(e[k], t.exps[k]);
  }
  return Poly::from_terms(mono.nvars(), {Term{e, Rational(1)}});
}

Poly pseudo_remainder(const Poly& a, const Poly& b, int var) {
  int db = b.degree(var);
  Poly lcb = b.leading_coefficient(var);
  Poly r = a;
  int k = a.degree(var) - db + 1;
  while (!r.is_zero() && r.degree(var) >= db) {
    int d = r.degree(var) - db;
    Poly lcr = r.leading_coefficient(var);
    r = lcb * r - (lcr * b).shifted(var, d);
    --k;
  }
  if (k > 0) r = r * lcb.pow(static_cast<unsigned>(k));
  return r;
}

Poly primitive_part(const Poly& p, int var) {
  Poly c = content(p, var);
  if (c.is_constant()) return p.monic();
  return must_divide(p, c).monic();
}

// Sub-resultant PRS for primitive inputs of positive degree in `var`.
Poly gcd_primitive(Poly a, Poly b, int var) {
  if (a.degree(var) < b.degree(var)) std::swap(a, b);
  int n = a.nvars();
  Poly g = Poly::constant(n, 1);
  Poly h = Poly::constant(n, 1);
  for (;;) {
    int d = a.degree(var) - b.degree(var);
    Poly r = pseudo_remainder(a, b, var);
    if (r.is_zero()) break;
    if (r.degree(var) == 0) return Poly::constant(n, 1);
    a = b;
    b = must_divide(r, g * h.pow(static_cast<unsigned>(d)));
    g = a.leading_coefficient(var);
    if (d == 1) {
      h = g;
    } else if (d > 1) {
      h = must_divide(g.pow(static_cast<unsigned>(d)), h.pow(static_cast<unsigned>(d - 1)));
    }
  }
  return primitive_part(b, var);
}

}  // namespace

Poly content(const Poly& p, int var) {
  int n = p.nvars();
  auto coeffs = p.coefficients(var);
  Poly g(n);
  for (const Poly& c : coeffs) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return Poly::constant(n, 1);
  }
  return g.is_zero() ? Poly::constant(n, 1) : g;
}

Poly content_over(const Poly& p, const std::vector<int>& main) {
  int n = p.nvars();
  std::map<Exponents, std::vector<Term>> groups;
  for (const Term& t : p.terms()) {
    Exponents key;
    Term rest = t;
    for (int v : main) {
      key.push_back(t.exps[static_cast<std::size_t>(v)]);
      rest.exps[static_cast<std::size_t>(v)] = 0;
    }
    groups[key].push_back(std::move(rest));
  }
  Poly g(n);
  for (auto& [key, terms] : groups) {
    g = gcd(g, Poly::from_terms(n, std::move(terms)));
    if (g.is_constant()) return Poly::constant(n, 1);
  }
  return g.is_zero() ? Poly::constant(n, 1) : g;
}

Poly gcd(const Poly& a, const Poly& b) {
  int n = std::max(a.nvars(), b.nvars());
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Poly::constant(n, 1);
  if (a == b) return a.monic();
  if (a.is_monomial()) return monomial_gcd(a, b);
  if (b.is_monomial()) return monomial_gcd(b, a);

  auto ua = a.used_vars();
  auto ub = b.used_vars();
  bool shared = false;
  for (int v = 0; v < n; ++v) {
    if (ua[static_cast<std::size_t>(v)] && ub[static_cast<std::size_t>(v)]) shared = true;
  }
  if (!shared) return Poly::constant(n, 1);
  for (int v = 0; v < n; ++v) {
    if (ua[static_cast<std::size_t>(v)] && !ub[static_cast<std::size_t>(v)]) return gcd(content(a, v), b);
    if (ub[static_cast<std::size_t>(v)] && !ua[static_cast<std::size_t>(v)]) return gcd(a, content(b, v));
  }
  int best = -1;
  int best_deg = 0;
  for (int v = 0; v < n; ++v) {
    if (!ua[static_cast<std::size_t>(v)]) continue;
    int d = std::max(a.degree(v), b.degree(v));
    if (best < 0 || d < best_deg) {
      best = v;
      best_deg = d;
    }
  }
  Poly ca = content(a, best);
  Poly cb = content(b, best);
  Poly c = gcd(ca, cb);
  Poly pa = ca.is_constant() ? a : must_divide(a, ca);
  Poly pb = cb.is_constant() ? b : must_divide(b, cb);
  Poly g = gcd_primitive(pa, pb, best);
  return (c * g).monic();
}

std::string to_debug_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Term& t : p.terms()) {
    if (!first) os << " + ";
    first = false;
    os << t.coeff.get_str();
    for (std::size_t k = 0; k < t.exps.size(); ++k) {
      if (t.exps[k] != 0) os << "*v" << k << "^" << t.exps[k];
    }
  }
  return os.str();
}

}  // namespace mayer
