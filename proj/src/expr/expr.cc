#include "mayer/expr.h"

#include <algorithm>
#include <cassert>

namespace mayer {

namespace {

constexpr std::size_t kHashMix = 0x9e3779b97f4a7c15ULL;

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + kHashMix + (seed << 6) + (seed >> 2));
}

std::size_t hash_rational(const Rational& q) {
  std::size_t h = mpz_get_ui(q.get_num_mpz_t());
  h = mix(h, mpz_get_ui(q.get_den_mpz_t()));
  h = mix(h, static_cast<std::size_t>(mpz_sgn(q.get_num_mpz_t()) + 2));
  h = mix(h, mpz_size(q.get_num_mpz_t()));
  return h;
}

std::uint64_t symbol_bit(const std::string& name) {
  return std::uint64_t{1} << (std::hash<std::string>{}(name) % 64);
}

Expr finish(std::shared_ptr<Node> n) {
  std::size_t h = static_cast<std::size_t>(n->kind) * 1315423911u;
  std::size_t size = 1;
  std::uint64_t mask = 0;
  switch (n->kind) {
    case Kind::Number:
      h = mix(h, hash_rational(n->value));
      break;
    case Kind::Symbol:
      h = mix(h, std::hash<std::string>{}(n->name));
      mask = symbol_bit(n->name);
      break;
    default:
      break;
  }
  if (n->kind == Kind::Function) h = mix(h, static_cast<std::size_t>(n->head));
  if (n->kind == Kind::Arbitrary || n->kind == Kind::SlotDerivative) {
    h = mix(h, std::hash<std::string>{}(n->name));
  }
  for (int o : n->orders) h = mix(h, static_cast<std::size_t>(o + 7));
  for (const Expr& op : n->ops) {
    h = mix(h, op.hash());
    size += op.size();
    mask |= op.symbol_mask();
  }
  n->hash = h;
  n->size = size;
  n->symmask = mask;
  return Expr::from_node(std::move(n));
}

Expr make_number(const Rational& q) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->value = q;
  n->value.canonicalize();
  return finish(std::move(n));
}

Expr make_node(Kind k, std::vector<Expr> ops) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->ops = std::move(ops);
  return finish(std::move(n));
}

const Expr& zero_expr() {
  static const Expr z = make_number(0);
  return z;
}

int cmp_int(long a, long b) { return a < b ? -1 : (a > b ? 1 : 0); }

int compare_lists(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i], b[i]);
    if (c != 0) return c;
  }
  return cmp_int(static_cast<long>(a.size()), static_cast<long>(b.size()));
}

// Product factors are ordered by base, then exponent.
std::pair<Expr, Expr> base_exponent(const Expr& f) {
  if (f.is(Kind::Power)) return {f.base(), f.exponent()};
  return {f, Expr(1)};
}

bool factor_less(const Expr& a, const Expr& b) {
  auto [ba, ea] = base_exponent(a);
  auto [bb, eb] = base_exponent(b);
  int c = compare(ba, bb);
  if (c != 0) return c < 0;
  return compare(ea, eb) < 0;
}

bool is_integer_rational(const Rational& q) { return mpz_cmp_ui(q.get_den_mpz_t(), 1) == 0; }

// Exact r-th root of a nonnegative integer, if it exists.
bool exact_root(const mpz_class& v, unsigned long r, mpz_class& out) {
  if (v < 0) return false;
  return mpz_root(out.get_mpz_t(), v.get_mpz_t(), r) != 0;
}

Expr rational_power(const Rational& a, const Rational& q) {
  if (is_integer_rational(q)) {
    long e = q.get_num().get_si();
    if (a == 0) {
      if (e < 0) throw DivisionByZero("0 raised to a negative power");
      return Expr(0);
    }
    mpz_class num, den;
    unsigned long ue = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(num.get_mpz_t(), a.get_num_mpz_t(), ue);
    mpz_pow_ui(den.get_mpz_t(), a.get_den_mpz_t(), ue);
    Rational r = e < 0 ? Rational(den, num) : Rational(num, den);
    r.canonicalize();
    return Expr(r);
  }
  if (a == 0) {
    if (q < 0) throw DivisionByZero("0 raised to a negative power");
    return Expr(0);
  }
  if (a == 1) return Expr(1);
  unsigned long r = q.get_den().get_ui();
  mpz_class rn, rd;
  if (a > 0 && exact_root(a.get_num(), r, rn) && exact_root(a.get_den(), r, rd)) {
    return rational_power(Rational(rn, rd), Rational(q.get_num()));
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->ops = {Expr(a), Expr(q)};
  return finish(std::move(n));
}

Expr raw_power(const Expr& b, const Expr& e) { return make_node(Kind::Power, {b, e}); }

Expr raw_function(Head h, const Expr& a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Function;
  n->head = h;
  n->ops = {a};
  return finish(std::move(n));
}

}  // namespace

const char* head_name(Head h) {
  switch (h) {
    case Head::Exp:
      return "exp";
    case Head::Log:
      return "log";
    case Head::Sin:
      return "sin";
    case Head::Cos:
      return "cos";
  }
  return "?";
}

Expr::Expr() : node_(zero_expr().node_) {}
Expr::Expr(int v) : Expr(Rational(v)) {}
Expr::Expr(long v) : Expr(Rational(v)) {}
Expr::Expr(const Rational& q) : node_(make_number(q).node_) {}

Expr Expr::from_node(std::shared_ptr<const Node> n) {
  return Expr(RawTag{}, std::move(n));
}

Expr Expr::symbol(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Symbol;
  n->name = name;
  return finish(std::move(n));
}

Kind Expr::kind() const { return node_->kind; }
bool Expr::is_zero() const { return node_->kind == Kind::Number && node_->value == 0; }
bool Expr::is_one() const { return node_->kind == Kind::Number && node_->value == 1; }
bool Expr::is_integer() const {
  return node_->kind == Kind::Number && is_integer_rational(node_->value);
}
const Rational& Expr::number() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
Head Expr::head() const { return node_->head; }
const std::vector<Expr>& Expr::operands() const { return node_->ops; }
const std::vector<int>& Expr::orders() const { return node_->orders; }
std::size_t Expr::hash() const { return node_->hash; }
std::size_t Expr::size() const { return node_->size; }
std::uint64_t Expr::symbol_mask() const { return node_->symmask; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::Number: {
      int c = cmp(a.number(), b.number());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Symbol: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Power:
    case Kind::Product:
    case Kind::Sum:
      return compare_lists(a.operands(), b.operands());
    case Kind::Function:
      if (a.head() != b.head()) return a.head() < b.head() ? -1 : 1;
      return compare(a.arg(), b.arg());
    case Kind::Arbitrary:
    case Kind::SlotDerivative: {
      int c = a.name().compare(b.name());
      if (c != 0) return c < 0 ? -1 : 1;
      if (a.orders() != b.orders()) return a.orders() < b.orders() ? -1 : 1;
      return compare_lists(a.operands(), b.operands());
    }
  }
  return 0;
}

Rational rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::pair<Rational, Expr> split_coefficient(const Expr& e) {
  if (e.is_number()) return {e.number(), Expr(1)};
  if (e.is(Kind::Product) && e.operands().front().is_number()) {
    const auto& ops = e.operands();
    if (ops.size() == 2) return {ops[0].number(), ops[1]};
    return {ops[0].number(), make_node(Kind::Product, std::vector<Expr>(ops.begin() + 1, ops.end()))};
  }
  return {Rational(1), e};
}

bool negative_leading(const Expr& e) {
  switch (e.kind()) {
    case Kind::Number:
      return e.number() < 0;
    case Kind::Product:
      return e.operands().front().is_number() && e.operands().front().number() < 0;
    case Kind::Sum: {
      // The constant term sorts first; look at the first non-constant term.
      for (const Expr& t : e.operands()) {
        if (t.is_number()) continue;
        return negative_leading(t);
      }
      return false;
    }
    default:
      return false;
  }
}

namespace {

Expr scale(const Rational& c, const Expr& rest) {
  if (c == 0) return Expr(0);
  if (c == 1) return rest;
  if (rest.is_one()) return Expr(c);
  std::vector<Expr> ops;
  ops.push_back(Expr(c));
  if (rest.is(Kind::Product)) {
    ops.insert(ops.end(), rest.operands().begin(), rest.operands().end());
  } else {
    ops.push_back(rest);
  }
  return make_node(Kind::Product, std::move(ops));
}

void flatten_sum(const Expr& t, Rational& constant, ExprMap<Rational>& collected) {
  if (t.is(Kind::Sum)) {
    for (const Expr& s : t.operands()) flatten_sum(s, constant, collected);
    return;
  }
  if (t.is_number()) {
    constant += t.number();
    return;
  }
  auto [c, rest] = split_coefficient(t);
  auto it = collected.find(rest);
  if (it == collected.end()) {
    collected.emplace(rest, c);
  } else {
    it->second += c;
  }
}

}  // namespace

Expr add(std::vector<Expr> terms) {
  if (terms.empty()) return Expr(0);
  if (terms.size() == 1) return terms[0];
  Rational constant = 0;
  ExprMap<Rational> collected;
  for (const Expr& t : terms) flatten_sum(t, constant, collected);
  std::vector<Expr> out;
  if (constant != 0) out.push_back(Expr(constant));
  for (auto& [rest, c] : collected) {
    if (c == 0) continue;
    out.push_back(scale(c, rest));
  }
  if (out.empty()) return Expr(0);
  if (out.size() == 1) return out[0];
  return make_node(Kind::Sum, std::move(out));
}

Expr mul(std::vector<Expr> factors) {
  if (factors.empty()) return Expr(1);
  if (factors.size() == 1) return factors[0];
  Rational coeff = 1;
  ExprMap<std::vector<Expr>> by_base;
  std::vector<Expr> work = std::move(factors);
  while (!work.empty()) {
    std::vector<Expr> next;
    for (const Expr& f : work) {
      if (f.is_number()) {
        coeff *= f.number();
        continue;
      }
      if (f.is(Kind::Product)) {
        for (const Expr& g : f.operands()) next.push_back(g);
        continue;
      }
      auto [b, e] = base_exponent(f);
      by_base[b].push_back(e);
    }
    work = std::move(next);
  }
  if (coeff == 0) return Expr(0);

  std::vector<Expr> out;
  for (;;) {
    bool again = false;
    out.clear();
    ExprMap<std::vector<Expr>> regrouped;
    for (auto& [b, exps] : by_base) {
      Expr e = exps.size() == 1 ? exps[0] : add(exps);
      Expr p = pow(b, e);
      if (p.is_number()) {
        coeff *= p.number();
        continue;
      }
      if (p.is(Kind::Product)) {
        again = true;
        for (const Expr& g : p.operands()) {
          if (g.is_number()) {
            coeff *= g.number();
          } else {
            auto [gb, ge] = base_exponent(g);
            regrouped[gb].push_back(ge);
          }
        }
        continue;
      }
      auto [pb, pe] = base_exponent(p);
      auto& slot = regrouped[pb];
      slot.push_back(pe);
      if (slot.size() > 1) again = true;
      out.push_back(p);
    }
    if (!again) break;
    by_base = std::move(regrouped);
  }
  if (coeff == 0) return Expr(0);
  std::sort(out.begin(), out.end(), factor_less);
  if (out.empty()) return Expr(coeff);
  if (out.size() == 1) {
    if (coeff == 1) return out[0];
    if (out[0].is(Kind::Sum)) {
      std::vector<Expr> terms;
      for (const Expr& t : out[0].operands()) terms.push_back(mul({Expr(coeff), t}));
      return add(std::move(terms));
    }
  }
  std::vector<Expr> ops;
  if (coeff != 1) ops.push_back(Expr(coeff));
  ops.insert(ops.end(), out.begin(), out.end());
  return make_node(Kind::Product, std::move(ops));
}

Expr pow(const Expr& b, const Expr& e) {
  if (e.is_number()) {
    const Rational& q = e.number();
    if (q == 0) return Expr(1);
    if (q == 1) return b;
    if (b.is_number()) return rational_power(b.number(), q);
    if (b.is(Kind::Power)) return pow(b.base(), mul({b.exponent(), e}));
    if (b.is(Kind::Product)) {
      std::vector<Expr> fs;
      for (const Expr& f : b.operands()) fs.push_back(pow(f, e));
      return mul(std::move(fs));
    }
    if (b.is(Kind::Function) && b.head() == Head::Exp && !is_integer_rational(q)) {
      return exp(mul({e, b.arg()}));
    }
    return raw_power(b, e);
  }
  if (b.is_one()) return Expr(1);
  if (b.is_zero()) return Expr(0);
  if (b.is(Kind::Power)) return pow(b.base(), mul({b.exponent(), e}));
  if (b.is(Kind::Function) && b.head() == Head::Exp) return exp(mul({e, b.arg()}));
  return raw_power(b, e);
}

Expr apply(Head h, const Expr& a) {
  switch (h) {
    case Head::Exp: {
      if (a.is_zero()) return Expr(1);
      if (a.is(Kind::Function) && a.head() == Head::Log) return a.arg();
      if (a.is(Kind::Sum)) {
        std::vector<Expr> fs;
        for (const Expr& t : a.operands()) fs.push_back(exp(t));
        return mul(std::move(fs));
      }
      auto [c, rest] = split_coefficient(a);
      if (rest.is(Kind::Function) && rest.head() == Head::Log) return pow(rest.arg(), Expr(c));
      if (!a.is_number() && c != 1 && is_integer_rational(c)) {
        return raw_power(raw_function(Head::Exp, rest), Expr(c));
      }
      if (!a.is_number() && c < 0) return raw_power(raw_function(Head::Exp, mul({Expr(-1), a})), Expr(-1));
      return raw_function(Head::Exp, a);
    }
    case Head::Log: {
      if (a.is_one()) return Expr(0);
      if (a.is_zero()) throw DivisionByZero("log(0)");
      if (a.is(Kind::Function) && a.head() == Head::Exp) return a.arg();
      if (a.is(Kind::Power)) return mul({a.exponent(), log(a.base())});
      if (a.is(Kind::Product)) {
        auto [c, rest] = split_coefficient(a);
        if (c > 0) {
          std::vector<Expr> terms;
          if (c != 1) terms.push_back(raw_function(Head::Log, Expr(c)));
          for (const Expr& f : rest.is(Kind::Product) ? rest.operands() : std::vector<Expr>{rest}) {
            terms.push_back(log(f));
          }
          return add(std::move(terms));
        }
      }
      return raw_function(Head::Log, a);
    }
    case Head::Sin:
      if (a.is_zero()) return Expr(0);
      if (negative_leading(a)) return mul({Expr(-1), raw_function(Head::Sin, mul({Expr(-1), a}))});
      return raw_function(Head::Sin, a);
    case Head::Cos:
      if (a.is_zero()) return Expr(1);
      if (negative_leading(a)) return raw_function(Head::Cos, mul({Expr(-1), a}));
      return raw_function(Head::Cos, a);
  }
  return raw_function(h, a);
}

Expr exp(const Expr& a) { return apply(Head::Exp, a); }
Expr log(const Expr& a) { return apply(Head::Log, a); }
Expr sin(const Expr& a) { return apply(Head::Sin, a); }
Expr cos(const Expr& a) { return apply(Head::Cos, a); }
Expr sqrt(const Expr& a) { return pow(a, Expr(rational(1, 2))); }

Expr arbitrary(const std::string& name, std::vector<Expr> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Arbitrary;
  n->name = name;
  n->ops = std::move(args);
  return finish(std::move(n));
}

Expr slot_derivative(const std::string& name, std::vector<int> orders, std::vector<Expr> args) {
  if (orders.size() != args.size()) throw ArityError("slot derivative order/argument mismatch for " + name);
  if (std::all_of(orders.begin(), orders.end(), [](int o) { return o == 0; })) {
    return arbitrary(name, std::move(args));
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::SlotDerivative;
  n->name = name;
  n->orders = std::move(orders);
  n->ops = std::move(args);
  return finish(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return add({a, mul({Expr(-1), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw DivisionByZero("division by zero");
  return mul({a, pow(b, Expr(-1))});
}
Expr operator-(const Expr& a) { return mul({Expr(-1), a}); }

void visit(const Expr& e, const std::function<bool(const Expr&)>& pre) {
  if (!pre(e)) return;
  for (const Expr& op : e.operands()) visit(op, pre);
}

bool contains_symbol(const Expr& e, const std::string& name) {
  if ((e.symbol_mask() & symbol_bit(name)) == 0) return false;
  if (e.is(Kind::Symbol)) return e.name() == name;
  for (const Expr& op : e.operands()) {
    if (contains_symbol(op, name)) return true;
  }
  return false;
}

bool contains_any_symbol(const Expr& e, const std::set<std::string>& names) {
  for (const auto& n : names) {
    if (contains_symbol(e, n)) return true;
  }
  return false;
}

bool contains_kind(const Expr& e, Kind k) {
  if (e.kind() == k) return true;
  for (const Expr& op : e.operands()) {
    if (contains_kind(op, k)) return true;
  }
  return false;
}

bool contains_function(const Expr& e, const std::string& fn_name) {
  bool found = false;
  visit(e, [&](const Expr& s) {
    if (found) return false;
    if ((s.is(Kind::Arbitrary) || s.is(Kind::SlotDerivative)) && s.name() == fn_name) found = true;
    return !found;
  });
  return found;
}

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  visit(e, [&](const Expr& s) {
    if (s.symbol_mask() == 0) return false;
    if (s.is(Kind::Symbol)) out.insert(s.name());
    return true;
  });
  return out;
}

std::map<std::string, std::size_t> arbitrary_functions(const Expr& e) {
  std::map<std::string, std::size_t> out;
  visit(e, [&](const Expr& s) {
    if (s.is(Kind::Arbitrary) || s.is(Kind::SlotDerivative)) {
      auto [it, inserted] = out.emplace(s.name(), s.operands().size());
      if (!inserted && it->second != s.operands().size()) {
        throw ArityError("arbitrary function " + s.name() + " used with different arities");
      }
    }
    return true;
  });
  return out;
}

Expr map_children(const Expr& e, const std::function<Expr(const Expr&)>& f) {
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Symbol:
      return e;
    case Kind::Power:
      return pow(f(e.base()), f(e.exponent()));
    case Kind::Product: {
      std::vector<Expr> ops;
      for (const Expr& op : e.operands()) ops.push_back(f(op));
      return mul(std::move(ops));
    }
    case Kind::Sum: {
      std::vector<Expr> ops;
      for (const Expr& op : e.operands()) ops.push_back(f(op));
      return add(std::move(ops));
    }
    case Kind::Function:
      return apply(e.head(), f(e.arg()));
    case Kind::Arbitrary: {
      std::vector<Expr> ops;
      for (const Expr& op : e.operands()) ops.push_back(f(op));
      return arbitrary(e.name(), std::move(ops));
    }
    case Kind::SlotDerivative: {
      std::vector<Expr> ops;
      for (const Expr& op : e.operands()) ops.push_back(f(op));
      return slot_derivative(e.name(), e.orders(), std::move(ops));
    }
  }
  return e;
}

namespace {

class Differentiator {
 public:
  explicit Differentiator(const std::string& var) : var_(var), bit_(symbol_bit(var)) {}

  Expr operator()(const Expr& e) {
    if ((e.symbol_mask() & bit_) == 0) return Expr(0);
    auto it = cache_.find(e.id());
    if (it != cache_.end()) return it->second;
    Expr r = compute(e);
    cache_.emplace(e.id(), r);
    keep_.push_back(e);
    return r;
  }

 private:
  Expr compute(const Expr& e) {
    switch (e.kind()) {
      case Kind::Number:
        return Expr(0);
      case Kind::Symbol:
        return e.name() == var_ ? Expr(1) : Expr(0);
      case Kind::Sum: {
        std::vector<Expr> terms;
        for (const Expr& t : e.operands()) terms.push_back((*this)(t));
        return add(std::move(terms));
      }
      case Kind::Product: {
        const auto& fs = e.operands();
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < fs.size(); ++i) {
          Expr d = (*this)(fs[i]);
          if (d.is_zero()) continue;
          std::vector<Expr> prod;
          for (std::size_t j = 0; j < fs.size(); ++j) prod.push_back(j == i ? d : fs[j]);
          terms.push_back(mul(std::move(prod)));
        }
        return add(std::move(terms));
      }
      case Kind::Power: {
        const Expr& b = e.base();
        const Expr& x = e.exponent();
        Expr db = (*this)(b);
        Expr dx = (*this)(x);
        if (dx.is_zero()) return mul({x, pow(b, add({x, Expr(-1)})), db});
        return mul({e, add({mul({dx, log(b)}), mul({x, db, pow(b, Expr(-1))})})});
      }
      case Kind::Function: {
        const Expr& a = e.arg();
        Expr da = (*this)(a);
        switch (e.head()) {
          case Head::Exp:
            return mul({e, da});
          case Head::Log:
            return mul({da, pow(a, Expr(-1))});
          case Head::Sin:
            return mul({cos(a), da});
          case Head::Cos:
            return mul({Expr(-1), sin(a), da});
        }
        return Expr(0);
      }
      case Kind::Arbitrary:
      case Kind::SlotDerivative: {
        const auto& args = e.operands();
        std::vector<int> base_orders = e.is(Kind::SlotDerivative) ? e.orders() : std::vector<int>(args.size(), 0);
        std::vector<Expr> terms;
        for (std::size_t j = 0; j < args.size(); ++j) {
          Expr da = (*this)(args[j]);
          if (da.is_zero()) continue;
          std::vector<int> orders = base_orders;
          orders[j] += 1;
          terms.push_back(mul({slot_derivative(e.name(), orders, args), da}));
        }
        return add(std::move(terms));
      }
    }
    return Expr(0);
  }

  std::string var_;
  std::uint64_t bit_;
  std::unordered_map<const Node*, Expr> cache_;
  std::vector<Expr> keep_;
};

class Substituter {
 public:
  Substituter(const Bindings& b, const FnBindings& f) : bindings_(b), fns_(f) {
    for (const auto& [name, value] : b) mask_ |= symbol_bit(name);
  }

  Expr operator()(const Expr& e) {
    if (fns_.empty() && (e.symbol_mask() & mask_) == 0) return e;
    auto it = cache_.find(e.id());
    if (it != cache_.end()) return it->second;
    Expr r = compute(e);
    cache_.emplace(e.id(), r);
    keep_.push_back(e);
    return r;
  }

 private:
  Expr compute(const Expr& e) {
    if (e.is(Kind::Symbol)) {
      auto it = bindings_.find(e.name());
      return it == bindings_.end() ? e : it->second;
    }
    if (e.is(Kind::Arbitrary) || e.is(Kind::SlotDerivative)) {
      auto it = fns_.find(e.name());
      if (it != fns_.end()) {
        const Lambda& fn = it->second;
        if (fn.params.size() != e.operands().size()) {
          throw ArityError("arity mismatch substituting " + e.name());
        }
        Expr body = fn.body;
        if (e.is(Kind::SlotDerivative)) {
          for (std::size_t j = 0; j < e.orders().size(); ++j) {
            for (int k = 0; k < e.orders()[j]; ++k) body = differentiate(body, fn.params[j]);
          }
        }
        Bindings slots;
        for (std::size_t j = 0; j < fn.params.size(); ++j) slots[fn.params[j]] = (*this)(e.operands()[j]);
        return substitute(body, slots);
      }
    }
    return map_children(e, [this](const Expr& c) { return (*this)(c); });
  }

  const Bindings& bindings_;
  const FnBindings& fns_;
  std::uint64_t mask_ = 0;
  std::unordered_map<const Node*, Expr> cache_;
  std::vector<Expr> keep_;
};

}  // namespace

Expr differentiate(const Expr& e, const std::string& var) {
  Differentiator d(var);
  return d(e);
}

Expr substitute(const Expr& e, const Bindings& bindings, const FnBindings& fn_bindings) {
  if (bindings.empty() && fn_bindings.empty()) return e;
  Substituter s(bindings, fn_bindings);
  return s(e);
}

Expr substitute(const Expr& e, const std::string& var, const Expr& value) {
  Bindings b{{var, value}};
  return substitute(e, b);
}

Expr replace_all(const Expr& e, const ExprMap<Expr>& rules) {
  std::unordered_map<const Node*, Expr> cache;
  std::vector<Expr> keep;
  std::function<Expr(const Expr&)> go = [&](const Expr& x) -> Expr {
    auto it = rules.find(x);
    if (it != rules.end()) return it->second;
    if (x.operands().empty()) return x;
    auto c = cache.find(x.id());
    if (c != cache.end()) return c->second;
    Expr r = map_children(x, go);
    cache.emplace(x.id(), r);
    keep.push_back(x);
    return r;
  };
  return go(e);
}

}  // namespace mayer
