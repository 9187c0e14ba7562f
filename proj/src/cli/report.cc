#include "mayer/report.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mayer/input.h"
#include "mayer/print.h"

namespace mayer {

namespace {

int exit_for(const std::string& status) {
  if (status == "solved") return 0;
  if (status == "partially_solved") return 1;
  if (status == "incompatible") return 2;
  return 3;
}

void finish(Report& r) { r.exit_code = exit_for(r.status); }

void check_given(Report& r, const Problem& p, const RunConfig& cfg) {
  r.checked_given = true;
  r.solution = *p.solution;
  for (const auto& [name, arity] : arbitrary_functions(*p.solution)) r.arbitrary.push_back({name, arity});
  r.verification = solution_q(p.system, *p.solution, kZeroSamples, cfg.seed);
  if (r.verification->overall == Overall::Fails) {
    r.status = "unsupported";
    r.reason = "given solution fails verification";
  } else {
    r.status = "solved";
  }
}

void solve(Report& r, const Problem& p, const RunConfig& cfg) {
  SolveOptions opts;
  opts.seed = cfg.seed;
  opts.degree = cfg.degree;
  opts.max_rounds = cfg.max_rounds;
  if (cfg.timeout_ms > 0) {
    opts.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(cfg.timeout_ms);
  }
  Outcome o = solve_overdetermined(p.system, opts);
  r.status = status_name(o.status);
  r.reason = o.reason;
  r.added = o.compat.added;
  r.rounds = o.compat.rounds;
  r.probabilistic = o.compat.probabilistic;
  r.witness = o.compat.witness;
  r.trace.insert(r.trace.end(), o.trace.begin(), o.trace.end());
  if (!o.solution) return;
  r.solution = o.solution->solution;
  for (const auto& a : o.solution->arbitrary) r.arbitrary.push_back({a.name, a.arity});
  r.unsolved = o.solution->unsolved;
  if (o.status != Status::Solved || !cfg.verify) return;
  opts.check_deadline();
  r.verification = solution_q(p.system, *r.solution, kZeroSamples, cfg.seed);
  if (r.verification->overall == Overall::Fails) {
    r.trace.push_back("rejected candidate " + to_string(*r.solution));
    r.status = "unsupported";
    r.reason = "candidate solution failed verification";
    r.solution.reset();
    r.arbitrary.clear();
  }
}

std::string solution_line(const Report& r) {
  std::vector<std::string> args(r.vars.begin(), r.vars.end());
  std::string lhs = r.unknown + "(";
  for (std::size_t i = 0; i < args.size(); ++i) lhs += (i ? ", " : "") + args[i];
  return lhs + ") = " + to_string(*r.solution);
}

std::string fmt_residual(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", static_cast<double>(x));
  return buf;
}

}  // namespace

Report run_text(const std::string& text, const RunConfig& cfg) {
  Problem p;
  try {
    p = parse_problem(text);
  } catch (const ParseError& e) {
    throw InputError(e.what());
  }
  Report r;
  r.unknown = p.system.unknown;
  r.vars = p.system.vars;
  r.trace = p.trace;
  try {
    if (p.solution) {
      check_given(r, p, cfg);
    } else {
      solve(r, p, cfg);
    }
  } catch (const Timeout&) {
    r.status = "unsupported";
    r.reason = "timeout after " + std::to_string(cfg.timeout_ms) + " ms";
    r.solution.reset();
    r.arbitrary.clear();
    r.unsolved.clear();
  }
  finish(r);
  return r;
}

Report run_file(const std::string& path, const RunConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return run_text(ss.str(), cfg);
  } catch (const InputError& e) {
    throw InputError(path + ":" + e.what());
  }
}

std::string format_text(const Report& r) {
  std::ostringstream os;
  os << "status: " << r.status << "\n";
  if (!r.reason.empty()) os << "reason: " << r.reason << "\n";
  if (r.witness) os << "witness: " << to_string(*r.witness) << "\n";
  if (r.solution) os << "solution: " << solution_line(r) << "\n";
  for (const auto& a : r.arbitrary) os << "arbitrary: " << a.name << " of " << a.arity << " argument(s)\n";
  for (const Expr& u : r.unsolved) os << "unsolved: " << to_string(u) << " = 0\n";
  os << "completion: " << r.rounds << " round(s), " << r.added.size() << " equation(s) added"
     << (r.probabilistic ? ", probabilistic" : "") << "\n";
  for (const Expr& a : r.added) os << "  added: " << to_string(a) << " = 0\n";
  if (r.verification) {
    os << "verification: " << overall_name(r.verification->overall) << ", max residual "
       << fmt_residual(r.verification->max_residual) << " over " << r.verification->trials << " point(s), seed "
       << r.verification->seed << "\n";
  } else {
    os << "verification: not run\n";
  }
  if (!r.trace.empty()) os << "trace:\n";
  for (const auto& t : r.trace) os << "  " << t << "\n";
  return os.str();
}

std::string format_json(const Report& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["status"] = r.status;
  j["solution"] = r.solution ? ordered_json(to_string(*r.solution)) : ordered_json(nullptr);
  j["arbitrary"] = ordered_json::array();
  for (const auto& a : r.arbitrary) j["arbitrary"].push_back({{"name", a.name}, {"arity", a.arity}});
  j["unsolved"] = ordered_json::array();
  for (const Expr& u : r.unsolved) j["unsolved"].push_back(to_string(u));
  ordered_json c;
  c["added"] = ordered_json::array();
  for (const Expr& a : r.added) c["added"].push_back(to_string(a));
  c["rounds"] = r.rounds;
  c["probabilistic"] = r.probabilistic;
  j["completion"] = c;
  ordered_json v;
  if (r.verification) {
    v["overall"] = overall_name(r.verification->overall);
    v["max_residual"] = static_cast<double>(r.verification->max_residual);
    v["trials"] = r.verification->trials;
    v["seed"] = r.verification->seed;
  } else {
    v["overall"] = "not_run";
    v["max_residual"] = nullptr;
    v["trials"] = 0;
    v["seed"] = nullptr;
  }
  j["verification"] = v;
  j["trace"] = r.trace;
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (r.witness) j["witness"] = to_string(*r.witness);
  return j.dump(2) + "\n";
}

std::string format_latex(const Report& r) {
  std::ostringstream os;
  os << "% status: " << r.status << "\n";
  if (!r.reason.empty()) os << "% reason: " << r.reason << "\n";
  if (r.witness) os << "% witness\n\\[ " << to_latex(*r.witness) << " \\neq 0 \\]\n";
  if (r.solution) {
    os << "\\[ " << r.unknown << " = " << to_latex(*r.solution) << " \\]\n";
  }
  for (const Expr& u : r.unsolved) os << "\\[ " << to_latex(u) << " = 0 \\]\n";
  if (r.verification) os << "% verification: " << overall_name(r.verification->overall) << "\n";
  return os.str();
}

std::string format_report(const Report& r, Format f) {
  switch (f) {
    case Format::Json: return format_json(r);
    case Format::Latex: return format_latex(r);
    case Format::Text: break;
  }
  return format_text(r);
}

}  // namespace mayer
