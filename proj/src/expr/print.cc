#include "mayer/print.h"

#include <sstream>
#include <vector>

namespace mayer {

namespace {

enum class Prec { Sum = 0, Product = 1, Unary = 2, Power = 3, Atom = 4 };

struct Style {
  bool latex = false;
};

std::string number_text(const Rational& q, const Style& st) {
  if (st.latex && q.get_den() != 1) {
    std::string sign = q < 0 ? "-" : "";
    mpz_class n = abs(q.get_num());
    return sign + "\\frac{" + n.get_str() + "}{" + q.get_den().get_str() + "}";
  }
  return q.get_str();
}

std::string latex_symbol(const std::string& name) {
  // Derivative symbols are named d(f,x).
  if (name.size() > 4 && name.rfind("d(", 0) == 0 && name.back() == ')') {
    std::string inner = name.substr(2, name.size() - 3);
    auto comma = inner.find(',');
    if (comma != std::string::npos) {
      return "\\frac{\\partial " + inner.substr(0, comma) + "}{\\partial " + inner.substr(comma + 1) + "}";
    }
  }
  if (name.size() > 1) {
    std::size_t i = name.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(name[i - 1]))) --i;
    if (i > 0 && i < name.size()) return name.substr(0, i) + "_{" + name.substr(i) + "}";
    if (name.size() > 1 && name.find('_') == std::string::npos) return "\\mathit{" + name + "}";
  }
  return name;
}

class Printer {
 public:
  explicit Printer(Style st) : st_(st) {}

  std::string print(const Expr& e, Prec ctx) {
    Prec own;
    std::string s = body(e, own);
    if (own < ctx) return st_.latex ? "\\left(" + s + "\\right)" : "(" + s + ")";
    return s;
  }

 private:
  std::string body(const Expr& e, Prec& own) {
    switch (e.kind()) {
      case Kind::Number: {
        const Rational& q = e.number();
        if (q < 0) {
          own = Prec::Unary;
        } else if (q.get_den() != 1 && !st_.latex) {
          own = Prec::Product;
        } else {
          own = Prec::Atom;
        }
        return number_text(q, st_);
      }
      case Kind::Symbol:
        own = Prec::Atom;
        return st_.latex ? latex_symbol(e.name()) : e.name();
      case Kind::Sum:
        own = Prec::Sum;
        return sum(e);
      case Kind::Product:
        return product(e, own);
      case Kind::Power:
        return power(e, own);
      case Kind::Function: {
        own = Prec::Atom;
        std::string a = print(e.arg(), Prec::Sum);
        if (st_.latex) {
          if (e.head() == Head::Exp) return "e^{" + a + "}";
          return std::string("\\") + head_name(e.head()) + "\\left(" + a + "\\right)";
        }
        return std::string(head_name(e.head())) + "(" + a + ")";
      }
      case Kind::Arbitrary: {
        own = Prec::Atom;
        std::string name = st_.latex ? latex_symbol(e.name()) : e.name();
        if (e.operands().empty()) return name;
        return name + (st_.latex ? "\\left(" : "(") + args(e) + (st_.latex ? "\\right)" : ")");
      }
      case Kind::SlotDerivative: {
        own = Prec::Atom;
        std::ostringstream os;
        if (st_.latex) {
          os << latex_symbol(e.name()) << "^{(";
        } else {
          os << "Derivative(";
        }
        for (std::size_t i = 0; i < e.orders().size(); ++i) {
          if (i) os << ",";
          os << e.orders()[i];
        }
        if (st_.latex) {
          os << ")}\\left(" << args(e) << "\\right)";
        } else {
          os << ")(" << e.name() << ")(" << args(e) << ")";
        }
        return os.str();
      }
    }
    own = Prec::Atom;
    return "?";
  }

  std::string args(const Expr& e) {
    std::string out;
    for (std::size_t i = 0; i < e.operands().size(); ++i) {
      if (i) out += ", ";
      out += print(e.operands()[i], Prec::Sum);
    }
    return out;
  }

  std::string sum(const Expr& e) {
    std::string out;
    bool first = true;
    // Constants print last, which reads more naturally.
    std::vector<Expr> terms;
    Expr constant(0);
    for (const Expr& t : e.operands()) {
      if (t.is_number()) {
        constant = t;
      } else {
        terms.push_back(t);
      }
    }
    if (!constant.is_zero()) terms.push_back(constant);
    for (const Expr& t : terms) {
      if (first) {
        out += print(t, Prec::Sum);
        first = false;
        continue;
      }
      if (negative_leading(t)) {
        out += " - " + print(mul({Expr(-1), t}), Prec::Product);
      } else {
        out += " + " + print(t, Prec::Product);
      }
    }
    return out;
  }

  std::string product(const Expr& e, Prec& own) {
    auto [c, rest] = split_coefficient(e);
    std::vector<Expr> num, den;
    const std::vector<Expr> single{rest};
    for (const Expr& f : rest.is(Kind::Product) ? rest.operands() : single) {
      if (f.is(Kind::Power) && f.exponent().is_number() && f.exponent().number() < 0) {
        den.push_back(pow(f.base(), Expr(Rational(-f.exponent().number()))));
      } else {
        num.push_back(f);
      }
    }
    bool negative = c < 0;
    Rational ac = abs(c);
    mpz_class cn = ac.get_num(), cd = ac.get_den();
    std::string sep = st_.latex ? " " : "*";

    std::string top;
    if (cn != 1 || num.empty()) top = cn.get_str();
    for (const Expr& f : num) {
      if (!top.empty()) top += sep;
      top += print(f, num.size() + (cn != 1 ? 1 : 0) > 1 || !den.empty() ? Prec::Power : Prec::Product);
    }
    std::vector<std::string> bottom_parts;
    if (cd != 1) bottom_parts.push_back(cd.get_str());
    for (const Expr& f : den) bottom_parts.push_back(print(f, Prec::Power));

    std::string out;
    if (bottom_parts.empty()) {
      out = top;
      own = negative ? Prec::Unary : Prec::Product;
    } else if (st_.latex) {
      std::string bottom;
      for (std::size_t i = 0; i < bottom_parts.size(); ++i) bottom += (i ? " " : "") + bottom_parts[i];
      out = "\\frac{" + top + "}{" + bottom + "}";
      own = negative ? Prec::Unary : Prec::Atom;
    } else {
      std::string bottom;
      for (std::size_t i = 0; i < bottom_parts.size(); ++i) bottom += (i ? "*" : "") + bottom_parts[i];
      if (bottom_parts.size() > 1) bottom = "(" + bottom + ")";
      out = top + "/" + bottom;
      own = negative ? Prec::Unary : Prec::Product;
    }
    if (num.size() == 1 && cn == 1 && bottom_parts.empty() && !negative) {
      // Plain single factor: inherit its precedence.
      own = Prec::Product;
    }
    return negative ? "-" + out : out;
  }

  std::string power(const Expr& e, Prec& own) {
    const Expr& b = e.base();
    const Expr& x = e.exponent();
    if (x.is_number() && x.number() == Rational(1, 2)) {
      own = Prec::Atom;
      std::string inner = print(b, Prec::Sum);
      return st_.latex ? "\\sqrt{" + inner + "}" : "sqrt(" + inner + ")";
    }
    if (x.is_number() && x.number() < 0) {
      Expr flipped = pow(b, Expr(Rational(-x.number())));
      std::string d = print(flipped, Prec::Power);
      if (st_.latex) {
        own = Prec::Atom;
        return "\\frac{1}{" + print(flipped, Prec::Sum) + "}";
      }
      own = Prec::Product;
      return "1/" + d;
    }
    own = Prec::Power;
    std::string bs = print(b, Prec::Atom);
    if (b.is_number() && b.number() >= 0 && b.number().get_den() == 1) bs = b.number().get_str();
    if (st_.latex) return bs + "^{" + print(x, Prec::Sum) + "}";
    std::string xs = print(x, Prec::Atom);
    if (x.is_number() && x.number().get_den() != 1) xs = "(" + x.number().get_str() + ")";
    return bs + "^" + xs;
  }

  Style st_;
};

}  // namespace

std::string to_string(const Expr& e) {
  Printer p(Style{false});
  return p.print(e, Prec::Sum);
}

std::string to_latex(const Expr& e) {
  Printer p(Style{true});
  return p.print(e, Prec::Sum);
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

}  // namespace mayer
