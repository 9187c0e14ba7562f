#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mayer {

using Rational = mpq_class;

// Declaration order is the canonical node order used by compare().
enum class Kind : std::uint8_t {
  Number,
  Symbol,
  Power,
  Product,
  Sum,
  Function,
  Arbitrary,
  SlotDerivative,
};

// sqrt is represented as a Power with exponent 1/2.
enum class Head : std::uint8_t { Exp, Log, Sin, Cos };

const char* head_name(Head h);

class DivisionByZero : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Node;

/// Immutable, canonical symbolic expression. Copies share structure.
///
/// Every Expr is built through the canonicalizing constructors below, so
/// sums and products are flat and sorted, rationals are reduced, and
/// structural equality is a meaningful (if incomplete) equality test.
class Expr {
 public:
  Expr();  // zero
  Expr(int v);  // NOLINT(google-explicit-constructor)
  Expr(long v);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& q);  // NOLINT(google-explicit-constructor)

  static Expr symbol(const std::string& name);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  bool is_number() const { return kind() == Kind::Number; }
  bool is_zero() const;
  bool is_one() const;
  bool is_integer() const;

  const Rational& number() const;
  const std::string& name() const;
  Head head() const;
  const std::vector<Expr>& operands() const;
  const std::vector<int>& orders() const;

  // Power accessors.
  const Expr& base() const { return operands()[0]; }
  const Expr& exponent() const { return operands()[1]; }
  // Function accessor.
  const Expr& arg() const { return operands()[0]; }

  std::size_t hash() const;
  std::size_t size() const;  // node count
  std::uint64_t symbol_mask() const;
  const Node* id() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  // Internal: wraps a freshly built node. Only the constructors in expr.cc
  // should call this.
  static Expr from_node(std::shared_ptr<const Node> n);

 private:
  struct RawTag {};
  Expr(RawTag, std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  Kind kind = Kind::Number;
  Rational value;
  std::string name;
  Head head = Head::Exp;
  std::vector<Expr> ops;
  std::vector<int> orders;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::uint64_t symmask = 0;
};

/// Total order on canonical expressions.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

template <class V>
using ExprMap = std::map<Expr, V, ExprLess>;
using ExprSet = std::set<Expr, ExprLess>;

// Canonicalizing constructors.
Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr pow(const Expr& base, const Expr& exponent);
Expr apply(Head h, const Expr& arg);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr sqrt(const Expr& a);
Expr arbitrary(const std::string& name, std::vector<Expr> args);
Expr slot_derivative(const std::string& name, std::vector<int> orders, std::vector<Expr> args);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

Rational rational(long num, long den = 1);

/// Splits c*rest into (c, rest); rest is 1 for a bare number.
std::pair<Rational, Expr> split_coefficient(const Expr& e);

/// True when the expression "looks negative": a negative number, a product
/// with negative coefficient, or a sum whose first term looks negative.
bool negative_leading(const Expr& e);

// Queries.
bool contains_symbol(const Expr& e, const std::string& name);
bool contains_any_symbol(const Expr& e, const std::set<std::string>& names);
bool contains_kind(const Expr& e, Kind k);
bool contains_function(const Expr& e, const std::string& fn_name);
std::set<std::string> free_symbols(const Expr& e);
/// Arbitrary-function names with their arities.
std::map<std::string, std::size_t> arbitrary_functions(const Expr& e);
void visit(const Expr& e, const std::function<bool(const Expr&)>& pre);

/// Bottom-up rebuild through the canonical constructors.
Expr map_children(const Expr& e, const std::function<Expr(const Expr&)>& f);

// Calculus and substitution.
Expr differentiate(const Expr& e, const std::string& var);

/// A pure function of named slots, used to instantiate arbitrary functions.
struct Lambda {
  std::vector<std::string> params;
  Expr body;
};

using Bindings = std::map<std::string, Expr>;
using FnBindings = std::map<std::string, Lambda>;

/// Simultaneous substitution of symbols and arbitrary functions. Slot
/// derivatives of a bound function are expanded through its body.
Expr substitute(const Expr& e, const Bindings& bindings, const FnBindings& fn_bindings = {});
Expr substitute(const Expr& e, const std::string& var, const Expr& value);
/// Replaces whole subexpressions (structural match) bottom-up.
Expr replace_all(const Expr& e, const ExprMap<Expr>& rules);

}  // namespace mayer
