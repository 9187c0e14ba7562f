#include "mayer/rational_nf.h"
#include "mayer/solve.h"
#include "mayer/zero.h"

namespace mayer {

namespace {

// Slope of u in s when u is affine in s.
std::optional<Expr> affine_slope(const Expr& u, const std::string& s) {
  Expr a = normalize(differentiate(u, s));
  if (a.is_zero() || contains_symbol(a, s)) return std::nullopt;
  return a;
}

class Integrator {
 public:
  explicit Integrator(std::string s) : s_(std::move(s)), sym_(Expr::symbol(s_)) {}

  std::optional<Expr> operator()(const Expr& e, int depth = 0) {
    if (!contains_symbol(e, s_)) return e * sym_;
    if (depth > 3) return std::nullopt;
    switch (e.kind()) {
      case Kind::Symbol:
        return pow(sym_, Expr(2)) / Expr(2);
      case Kind::Sum: {
        std::vector<Expr> parts;
        for (const Expr& t : e.operands()) {
          auto r = (*this)(t, depth);
          if (!r) return std::nullopt;
          parts.push_back(*r);
        }
        return add(std::move(parts));
      }
      case Kind::Product:
        return product(e, depth);
      case Kind::Power:
        return power(e, depth);
      case Kind::Function:
        return function(e);
      default:
        return std::nullopt;
    }
  }

 private:
  std::optional<Expr> expanded(const Expr& e, int depth) {
    Expr n = normalize(e);
    if (n == e || !n.is(Kind::Sum)) return std::nullopt;
    return (*this)(n, depth + 1);
  }

  std::optional<Expr> product(const Expr& e, int depth) {
    std::vector<Expr> constant, dependent;
    for (const Expr& f : e.operands()) (contains_symbol(f, s_) ? dependent : constant).push_back(f);
    if (dependent.size() == 1) {
      auto r = (*this)(dependent[0], depth);
      if (!r) return std::nullopt;
      constant.push_back(*r);
      return mul(std::move(constant));
    }
    return expanded(e, depth);
  }

  std::optional<Expr> power(const Expr& e, int depth) {
    const Expr& b = e.base();
    const Expr& x = e.exponent();
    if (!contains_symbol(x, s_)) {
      if (auto a = affine_slope(b, s_)) {
        if (x == Expr(-1)) return log(b) / *a;
        return pow(b, x + Expr(1)) / ((x + Expr(1)) * *a);
      }
      if (b.is(Kind::Function) && b.head() == Head::Exp && x.is_number()) {
        if (auto a = affine_slope(b.arg(), s_)) return e / (x * *a);
      }
      if (x.is_integer() && x.number() > 1) return expanded(e, depth);
      return std::nullopt;
    }
    if (!contains_symbol(b, s_)) {
      if (auto a = affine_slope(x, s_)) return e / (*a * log(b));
    }
    return std::nullopt;
  }

  std::optional<Expr> function(const Expr& e) {
    const Expr& u = e.arg();
    auto a = affine_slope(u, s_);
    if (!a) return std::nullopt;
    switch (e.head()) {
      case Head::Exp:
        return e / *a;
      case Head::Sin:
        return -cos(u) / *a;
      case Head::Cos:
        return sin(u) / *a;
      case Head::Log:
        return (u * e - u) / *a;
    }
    return std::nullopt;
  }

  std::string s_;
  Expr sym_;
};

}  // namespace

std::optional<Expr> integrate_univariate(const Expr& e, const std::string& s) {
  std::optional<Expr> r;
  try {
    r = Integrator(s)(e);
  } catch (const DivisionByZero&) {
    return std::nullopt;
  }
  if (!r) return std::nullopt;
  if (!zero_like(is_zero(differentiate(*r, s) - e))) return std::nullopt;
  return r;
}

}  // namespace mayer
