#include "mayer/input.h"

#include <algorithm>
#include <sstream>

namespace mayer {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_ident(const std::string& s) {
  if (s.empty()) return false;
  auto first = static_cast<unsigned char>(s[0]);
  if (!(std::isalpha(first) || first == '_' || first >= 0x80)) return false;
  for (unsigned char c : s)
    if (!(std::isalnum(c) || c == '_' || c >= 0x80)) return false;
  return true;
}

// Splits a comma separated name list, reporting bad names at their column.
std::vector<std::string> names(const std::string& rest, int line, int col0) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    std::size_t comma = rest.find(',', pos);
    if (comma == std::string::npos) comma = rest.size();
    std::string item = trim(rest.substr(pos, comma - pos));
    if (!valid_ident(item)) throw ParseError("expected a name", line, col0 + static_cast<int>(pos) + 1);
    out.push_back(item);
    pos = comma + 1;
  }
  return out;
}

constexpr std::size_t kSeveral = std::string::npos - 1;

// Position of the top-level '=' outside parentheses, npos if none.
std::size_t find_equals(const std::string& s) {
  int depth = 0;
  std::size_t found = std::string::npos;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == '=' && depth == 0) {
      if (found != std::string::npos) return kSeveral;
      found = i;
    }
  }
  return found;
}

}  // namespace

Problem parse_problem(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::vector<std::string> vars, params;
  std::set<std::string> arbitrary;
  std::optional<std::string> unknown;
  struct Pending {
    std::string text;
    int line, col;
    bool is_solution;
  };
  std::vector<Pending> pending;

  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (auto hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
    if (trim(s).empty()) continue;
    std::size_t start = s.find_first_not_of(" \t");
    std::size_t end = s.find_first_of(" \t", start);
    std::string word = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
    std::string rest = end == std::string::npos ? "" : s.substr(end);
    int col0 = static_cast<int>(end == std::string::npos ? s.size() : end);
    if (word == "vars") {
      if (!vars.empty()) throw ParseError("vars declared twice", line, static_cast<int>(start) + 1);
      vars = names(rest, line, col0);
    } else if (word == "unknown") {
      if (unknown) throw ParseError("unknown declared twice", line, static_cast<int>(start) + 1);
      auto n = names(rest, line, col0);
      if (n.size() != 1) throw ParseError("exactly one unknown expected", line, col0 + 1);
      unknown = n[0];
    } else if (word == "param") {
      auto n = names(rest, line, col0);
      params.insert(params.end(), n.begin(), n.end());
    } else if (word == "arbitrary") {
      auto n = names(rest, line, col0);
      arbitrary.insert(n.begin(), n.end());
    } else if (word == "eq" || word == "solution") {
      if (trim(rest).empty()) throw ParseError("missing expression", line, col0 + 1);
      pending.push_back({rest, line, col0, word == "solution"});
    } else {
      throw ParseError("unknown directive '" + word + "'", line, static_cast<int>(start) + 1);
    }
  }
  if (vars.empty()) throw ParseError("no vars directive", std::max(line, 1), 1);
  if (vars.size() < 2) throw ParseError("at least two independent variables are required", line, 1);
  if (!unknown) throw ParseError("no unknown directive", std::max(line, 1), 1);

  std::set<std::string> seen;
  for (const auto& v : vars)
    if (!seen.insert(v).second) throw ParseError("variable '" + v + "' repeated", 1, 1);
  for (const auto& p : params)
    if (!seen.insert(p).second) throw ParseError("parameter '" + p + "' clashes", 1, 1);
  if (seen.count(*unknown)) throw ParseError("unknown clashes with a variable", 1, 1);

  ParseContext ctx;
  ctx.symbols.insert(vars.begin(), vars.end());
  ctx.symbols.insert(params.begin(), params.end());
  ctx.arbitrary_functions = arbitrary;
  ctx.unknown = unknown;
  ctx.derivative_vars.insert(vars.begin(), vars.end());
  ctx.closed = true;

  Problem out;
  for (const auto& p : pending) {
    ctx.line = p.line;
    std::size_t eqpos = find_equals(p.text);
    if (eqpos == kSeveral) throw ParseError("more than one '='", p.line, p.col + 1);
    Expr value;
    ctx.column_offset = p.col;
    if (eqpos == std::string::npos) {
      value = parse_expr(p.text, ctx);
    } else {
      Expr lhs = parse_expr(p.text.substr(0, eqpos), ctx);
      ctx.column_offset = p.col + static_cast<int>(eqpos) + 1;
      Expr rhs = parse_expr(p.text.substr(eqpos + 1), ctx);
      value = lhs - rhs;
    }
    if (p.is_solution) {
      if (out.solution) throw ParseError("solution given twice", p.line, 1);
      if (eqpos != std::string::npos) throw ParseError("solution takes a single expression", p.line, p.col + 1);
      out.solution = value;
    } else {
      out.raw_equations.push_back(value);
    }
  }
  if (out.raw_equations.empty()) throw ParseError("no equations", std::max(line, 1), 1);
  out.system = make_system(vars, *unknown, params, out.raw_equations, &out.trace);
  return out;
}

}  // namespace mayer
