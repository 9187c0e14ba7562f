#include "mayer/parse.h"

#include <cctype>
#include <vector>

namespace mayer {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

std::string derivative_symbol_name(const std::string& unknown, const std::string& var) {
  return "d(" + unknown + "," + var + ")";
}

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

class Parser {
 public:
  Parser(const std::string& text, const ParseContext& ctx) : text_(text), ctx_(ctx) {}

  Expr parse() {
    skip_space();
    if (at_end()) fail("empty expression");
    Expr e = expression();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, ctx_.line, ctx_.column_offset + static_cast<int>(pos_) + 1);
  }

  bool at_end() const { return pos_ >= text_.size(); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expression() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(-term());
      } else {
        break;
      }
    }
    return add(std::move(terms));
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr d = unary();
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        acc = acc / d;
      } else {
        break;
      }
    }
    return acc;
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr b = primary();
    if (accept('^')) {
      std::size_t at = pos_;
      Expr x = unary();
      try {
        return pow(b, x);
      } catch (const DivisionByZero&) {
        pos_ = at;
        fail("division by zero");
      }
    }
    return b;
  }

  Expr primary() {
    skip_space();
    if (at_end()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (ident_start(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  Expr number() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (!at_end() && text_[pos_] == '.') {
      ++pos_;
      std::size_t frac_start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string whole = text_.substr(start, frac_start - 1 - start);
      std::string frac = text_.substr(frac_start, pos_ - frac_start);
      mpz_class den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      Rational q(mpz_class(whole + frac), den);
      q.canonicalize();
      return Expr(q);
    }
    return Expr(Rational(mpz_class(text_.substr(start, pos_ - start))));
  }

  std::string read_ident() {
    skip_space();
    std::size_t start = pos_;
    if (at_end() || !ident_start(static_cast<unsigned char>(text_[pos_]))) fail("expected identifier");
    while (!at_end() && ident_char(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::vector<Expr> call_args() {
    std::vector<Expr> args;
    if (accept(')')) return args;
    args.push_back(expression());
    while (accept(',')) args.push_back(expression());
    expect(')');
    return args;
  }

  Expr identifier() {
    std::size_t start = pos_;
    std::string name = read_ident();
    skip_space();
    bool call = !at_end() && text_[pos_] == '(';
    if (call) {
      static const std::vector<std::pair<std::string, Head>> kHeads = {
          {"exp", Head::Exp}, {"log", Head::Log}, {"sin", Head::Sin}, {"cos", Head::Cos}};
      if (name == "d") return derivative();
      ++pos_;
      for (const auto& [h, head] : kHeads) {
        if (name == h) {
          auto args = call_args();
          if (args.size() != 1) fail(name + " takes one argument");
          try {
            return apply(head, args[0]);
          } catch (const DivisionByZero&) {
            fail("log of zero");
          }
        }
      }
      if (name == "sqrt") {
        auto args = call_args();
        if (args.size() != 1) fail("sqrt takes one argument");
        return sqrt(args[0]);
      }
      if (ctx_.arbitrary_functions.count(name) || !ctx_.closed) {
        if (!ctx_.arbitrary_functions.count(name) && ctx_.symbols.count(name)) {
          pos_ = start;
          fail("'" + name + "' is not a function (implicit multiplication is not allowed)");
        }
        return arbitrary(name, call_args());
      }
      pos_ = start;
      fail("unknown function '" + name + "'");
    }
    if (ctx_.arbitrary_functions.count(name)) return arbitrary(name, {});
    if (ctx_.closed && !ctx_.symbols.count(name) && !(ctx_.unknown && *ctx_.unknown == name)) {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    return Expr::symbol(name);
  }

  Expr derivative() {
    ++pos_;  // '('
    std::size_t at = pos_;
    std::string fn = read_ident();
    if (ctx_.closed && (!ctx_.unknown || *ctx_.unknown != fn)) {
      pos_ = at;
      fail("d() expects the unknown function as first argument");
    }
    expect(',');
    skip_space();
    std::size_t var_at = pos_;
    std::string var = read_ident();
    if (ctx_.closed && !ctx_.derivative_vars.count(var)) {
      pos_ = var_at;
      fail("'" + var + "' is not an independent variable");
    }
    expect(')');
    return Expr::symbol(derivative_symbol_name(fn, var));
  }

  const std::string& text_;
  const ParseContext& ctx_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text, const ParseContext& ctx) {
  Parser p(text, ctx);
  return p.parse();
}

}  // namespace mayer
