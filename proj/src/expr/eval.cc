#include "mayer/eval.h"

#include <cmath>
#include <optional>

namespace mayer {

namespace {

constexpr long kMaxExactExponent = 64;

Value add_values(const Value& a, const Value& b) {
  if (a.exact && b.exact) return Value::of(Rational(a.q + b.q));
  return Value::of(a.as_float() + b.as_float());
}

Value mul_values(const Value& a, const Value& b) {
  if (a.exact && b.exact) return Value::of(Rational(a.q * b.q));
  return Value::of(a.as_float() * b.as_float());
}

Value int_power(const Value& b, long n) {
  if (b.is_zero() && n < 0) throw DivisionByZero("zero to a negative power");
  if (b.exact && std::labs(n) <= kMaxExactExponent) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), b.q.get_num_mpz_t(), static_cast<unsigned long>(std::labs(n)));
    mpz_pow_ui(den.get_mpz_t(), b.q.get_den_mpz_t(), static_cast<unsigned long>(std::labs(n)));
    Rational r = n >= 0 ? Rational(num, den) : Rational(den, num);
    r.canonicalize();
    return Value::of(r);
  }
  return Value::of(std::pow(b.as_float(), static_cast<long double>(n)));
}

// Exact q-th root of a nonnegative rational when it exists.
std::optional<Rational> exact_root(const Rational& r, unsigned long q) {
  mpz_class a, b;
  if (!mpz_root(a.get_mpz_t(), r.get_num_mpz_t(), q)) return std::nullopt;
  if (!mpz_root(b.get_mpz_t(), r.get_den_mpz_t(), q)) return std::nullopt;
  return Rational(a, b);
}

Value rational_power(const Value& b, const Rational& x) {
  long num = x.get_num().get_si();
  unsigned long den = x.get_den().get_ui();
  bool odd = den % 2 == 1;
  if (b.exact) {
    if (b.q < 0 && !odd) throw DomainError("even root of a negative number");
    Rational mag = abs(b.q);
    if (auto root = exact_root(mag, den)) {
      Value v = Value::of(b.q < 0 ? Rational(-*root) : *root);
      return int_power(v, num);
    }
  }
  long double f = b.as_float();
  if (f < 0 && !odd) throw DomainError("even root of a negative number");
  if (f == 0 && num < 0) throw DivisionByZero("zero to a negative power");
  long double root = std::pow(std::fabs(f), 1.0L / static_cast<long double>(den));
  if (f < 0) root = -root;
  return Value::of(std::pow(root, static_cast<long double>(num)));
}

class Evaluator {
 public:
  explicit Evaluator(const Point& pt) : pt_(pt) {}

  Value operator()(const Expr& e) {
    switch (e.kind()) {
      case Kind::Number:
        return Value::of(e.number());
      case Kind::Symbol: {
        auto it = pt_.symbols.find(e.name());
        if (it == pt_.symbols.end()) throw EvalError("no value for symbol " + e.name());
        return Value::of(it->second);
      }
      case Kind::Sum: {
        Value acc = Value::of(Rational(0));
        for (const Expr& t : e.operands()) acc = add_values(acc, (*this)(t));
        return acc;
      }
      case Kind::Product: {
        Value acc = Value::of(Rational(1));
        for (const Expr& f : e.operands()) acc = mul_values(acc, (*this)(f));
        return acc;
      }
      case Kind::Power: {
        Value b = (*this)(e.base());
        if (e.exponent().is_integer()) return int_power(b, e.exponent().number().get_num().get_si());
        if (e.exponent().is_number()) return rational_power(b, e.exponent().number());
        Value x = (*this)(e.exponent());
        if (x.exact && x.q.get_den() == 1) return int_power(b, x.q.get_num().get_si());
        long double bf = b.as_float();
        if (bf <= 0) throw DomainError("non-positive base with symbolic exponent");
        return Value::of(std::pow(bf, x.as_float()));
      }
      case Kind::Function:
        return function(e);
      case Kind::Arbitrary:
      case Kind::SlotDerivative:
        return arbitrary(e);
    }
    throw EvalError("unreachable");
  }

 private:
  Value function(const Expr& e) {
    Value a = (*this)(e.arg());
    switch (e.head()) {
      case Head::Exp:
        if (a.is_zero()) return Value::of(Rational(1));
        return Value::of(std::exp(a.as_float()));
      case Head::Log:
        if (a.exact && a.q == 1) return Value::of(Rational(0));
        if (a.as_float() <= 0) throw DomainError("log of a non-positive number");
        return Value::of(std::log(a.as_float()));
      case Head::Sin:
        if (a.is_zero()) return Value::of(Rational(0));
        return Value::of(std::sin(a.as_float()));
      case Head::Cos:
        if (a.is_zero()) return Value::of(Rational(1));
        return Value::of(std::cos(a.as_float()));
    }
    throw EvalError("unknown function head");
  }

  Value arbitrary(const Expr& e) {
    auto it = pt_.functions.find(e.name());
    if (it == pt_.functions.end()) throw EvalError("no instance for function " + e.name());
    const FnInstance& fn = it->second;
    if (fn.arity != e.operands().size()) throw ArityError("arity mismatch for " + e.name());
    std::vector<Value> args;
    for (const Expr& a : e.operands()) args.push_back((*this)(a));
    std::vector<int> orders(fn.arity, 0);
    if (e.is(Kind::SlotDerivative)) orders = e.orders();
    Value acc = Value::of(Rational(0));
    for (const auto& [c, alpha] : fn.monomials) {
      // d^orders of slots^alpha
      Rational scale = c;
      bool vanishes = false;
      std::vector<int> remaining(alpha);
      for (std::size_t i = 0; i < fn.arity && !vanishes; ++i) {
        for (int k = 0; k < orders[i]; ++k) {
          if (remaining[i] == 0) {
            vanishes = true;
            break;
          }
          scale *= remaining[i];
          --remaining[i];
        }
      }
      if (vanishes) continue;
      Value term = Value::of(scale);
      for (std::size_t i = 0; i < fn.arity; ++i) {
        if (remaining[i] > 0) term = mul_values(term, int_power(args[i], remaining[i]));
      }
      acc = add_values(acc, term);
    }
    return acc;
  }

  const Point& pt_;
};

}  // namespace

Value eval_at(const Expr& e, const Point& pt) { return Evaluator(pt)(e); }

Rational PointSampler::positive_rational() {
  std::uniform_int_distribution<long> den_d(2, 9);
  long den = den_d(rng_);
  std::uniform_int_distribution<long> num_d(1, 4 * den);
  Rational r(num_d(rng_), den);
  r.canonicalize();
  return r;
}

Rational PointSampler::signed_rational() {
  std::uniform_int_distribution<long> den_d(1, 5);
  long den = den_d(rng_);
  std::uniform_int_distribution<long> num_d(-3 * den, 3 * den);
  Rational r(num_d(rng_), den);
  r.canonicalize();
  return r;
}

FnInstance PointSampler::function(std::size_t arity) {
  FnInstance fn;
  fn.arity = arity;
  std::vector<int> alpha(arity, 0);
  fn.monomials.emplace_back(signed_rational(), alpha);
  for (std::size_t i = 0; i < arity; ++i) {
    alpha.assign(arity, 0);
    alpha[i] = 1;
    fn.monomials.emplace_back(signed_rational(), alpha);
    for (std::size_t j = i; j < arity; ++j) {
      alpha.assign(arity, 0);
      alpha[i] += 1;
      alpha[j] += 1;
      fn.monomials.emplace_back(signed_rational(), alpha);
    }
  }
  return fn;
}

Point PointSampler::cover(const std::vector<Expr>& exprs) {
  std::set<std::string> syms;
  std::map<std::string, std::size_t> fns;
  for (const Expr& e : exprs) {
    auto s = free_symbols(e);
    syms.insert(s.begin(), s.end());
    auto f = arbitrary_functions(e);
    fns.insert(f.begin(), f.end());
  }
  Point pt;
  for (const auto& s : syms) pt.symbols[s] = positive_rational();
  for (const auto& [name, arity] : fns) pt.functions[name] = function(arity);
  return pt;
}

}  // namespace mayer
