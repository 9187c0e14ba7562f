// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "mayer/input.h"
#include "mayer/parse.h"
#include "mayer/print.h"
#include "mayer/report.h"
#include "mayer/single.h"
#include "mayer/verify.h"
#include "props.h"

using namespace mayer;

namespace {

constexpr double kCoreSeconds = 5;
constexpr double kLargeSeconds = 60;
constexpr long double kResidualTol = 1e-9L;

const std::string kCorpus = MAYER_CORPUS;

struct Result {
  bool pass = false;
  std::string detail;
};

Report run(const std::string& file) { return run_file(kCorpus + "/" + file, RunConfig{}); }

bool verified(const Report& r, bool exact) {
  if (!r.verification) return false;
  if (exact) return r.verification->overall == Overall::Holds;
  return r.verification->overall != Overall::Fails && r.verification->max_residual < kResidualTol;
}

bool traced(const Report& r, const std::string& needle) {
  for (const auto& t : r.trace)
    if (t.find(needle) != std::string::npos) return true;
  return false;
}

std::string describe(const Report& r) {
  std::string s = r.status;
  for (const auto& a : r.arbitrary) s += " " + a.name + "/" + std::to_string(a.arity);
  if (r.verification) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " %s %.2g", overall_name(r.verification->overall),
                  static_cast<double>(r.verification->max_residual));
    s += buf;
  }
  if (!r.unsolved.empty()) s += " unsolved=" + std::to_string(r.unsolved.size());
  if (!r.reason.empty()) s += " (" + r.reason + ")";
  return s;
}

// solved, one arbitrary function of `arity` arguments, verifier Holds
Result solved_with(const std::string& file, std::size_t arity, bool exact = true) {
  Report r = run(file);
  bool ok = r.status == "solved" && r.arbitrary.size() == 1 && r.arbitrary[0].arity == arity && verified(r, exact);
  return {ok, describe(r)};
}

Result property(const props::Outcome& o, int min_cases) {
  std::string d = o.name + " " + std::to_string(o.cases - o.failures) + "/" + std::to_string(o.cases);
  if (!o.ok()) d += " counterexample: " + o.example;
  return {o.ok() && o.cases >= min_cases, d};
}

Result all_of(std::initializer_list<Result> rs) {
  Result out{true, ""};
  for (const auto& r : rs) {
    out.pass = out.pass && r.pass;
    out.detail += (out.detail.empty() ? "" : "; ") + r.detail;
  }
  return out;
}

Result c1() { return solved_with("invariants_six.pde", 2); }
Result c2() { return solved_with("invariants_weighted.pde", 4); }
Result c3() { return solved_with("linear_pair.pde", 2); }
Result c4() { return solved_with("characteristic_triple.pde", 1); }

Result c5() {
  Report r = run("exact_trig.pde");
  bool ok = r.status == "solved" && r.arbitrary.size() == 1 && r.arbitrary[0].arity == 0 &&
            traced(r, "exact form") && verified(r, false) && r.verification->trials == kZeroSamples;
  return {ok, describe(r)};
}

Result c6() {
  Report r = run("obstruction.pde");
  bool ok = r.status == "incompatible" && r.exit_code == 2 && r.witness && *r.witness == Expr(-1);
  return {ok, describe(r) + (r.witness ? " witness " + to_string(*r.witness) : "")};
}

Result c7() {
  Report r = run("needs_completion.pde");
  bool added = r.added.size() == 1 && r.added[0] == Expr::symbol(derivative_symbol_name("z", "x3"));
  bool ok = r.status == "solved" && added && r.arbitrary.size() == 1 && r.arbitrary[0].arity == 0 &&
            verified(r, true);
  return {ok, describe(r) + (added ? " added p3" : " completion differs")};
}

Result c8() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(kCorpus + "/solutions"))
    if (e.path().extension() == ".pde") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  int good = 0;
  std::string bad;
  for (const auto& f : files) {
    Report r = run_file(f.string(), RunConfig{});
    if (r.checked_given && r.status == "solved" && verified(r, false)) {
      ++good;
    } else {
      bad += " " + f.filename().string();
    }
  }
  bool ok = !files.empty() && good == static_cast<int>(files.size());
  return {ok, std::to_string(good) + "/" + std::to_string(files.size()) + " fixtures verify" + bad};
}

Result c9() { return solved_with("invariants_twelve.pde", 6); }

std::string rungs(const Report& r) {
  std::string out;
  for (const char* h : {"H1", "H2", "H3", "H4", "H5"})
    if (traced(r, std::string(h) + " invariant")) out += std::string(out.empty() ? "" : ",") + h;
  return out;
}

// The cascade meets these systems one reduced equation at a time and the
// ladder settles them at H4; H5 is checked on the unreduced field.
Result c10() {
  Report a = run("weighted_triple.pde");
  Report b = run("polynomial_pair.pde");
  auto ok = [](const Report& r) {
    return r.status == "solved" && r.arbitrary.size() == 1 && r.arbitrary[0].arity == 1 && verified(r, true);
  };
  VectorField v{{"x", "y", "z", "t"}, {}};
  for (const char* c : {"1", "0", "t + x*y + x*z", "y + z - 3*x"}) v.coeffs.push_back(parse_expr(c));
  std::vector<std::string> trace;
  auto phis = first_integrals(v, 3, {}, &trace);
  std::vector<Expr> with = phis;
  with.push_back(parse_expr("z - t*x - x^3 - y^2/2"));
  bool h5 = false;
  for (const auto& t : trace) h5 = h5 || t.rfind("H5", 0) == 0;
  h5 = h5 && gradient_rank(with, v.vars) == phis.size();
  return {ok(a) && ok(b) && h5, describe(a) + " [" + rungs(a) + "]; " + describe(b) + " [" + rungs(b) + "]; " +
                                    (h5 ? "H5 recovers the polynomial integral" : "H5 misses the polynomial integral")};
}

Result c11() {
  Report r = run("product_pair.pde");
  return {r.status == "partially_solved" && r.unsolved.size() == 2, describe(r)};
}

Result c12() {
  Report r = run("exponential_pair.pde");
  bool rung = traced(r, "separable semilinear");
  bool ok = r.status == "solved" && rung && verified(r, true);
  return {ok, describe(r) + (rung ? " via separable semilinear rung" : " rung not used")};
}

Result c13() {
  return all_of({property(props::bracket_antisymmetry(200, 1), 200), property(props::bracket_self(200, 2), 200),
                 property(props::bracket_bilinear(200, 3), 200), property(props::bracket_leibniz(200, 4), 200),
                 property(props::bracket_jacobi(200, 5), 200)});
}

Result c14() {
  return all_of({property(props::normalize_idempotent(500, 6), 500),
                 property(props::derivative_finite_difference(200, 7, 1e-5), 200),
                 property(props::integrate_round_trip(300, 8), 1)});
}

Result c15() {
  return all_of({property(props::single_soundness(200, 9), 1), property(props::corpus_soundness(kCorpus), 1)});
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double limit;  // seconds, 0 for none
    std::function<Result()> check;
  };
  const Criterion criteria[] = {
      {1, kCoreSeconds, c1},  {2, kCoreSeconds, c2},   {3, kCoreSeconds, c3}, {4, kCoreSeconds, c4},
      {5, kCoreSeconds, c5},  {6, kCoreSeconds, c6},   {7, kCoreSeconds, c7}, {8, kCoreSeconds, c8},
      {9, kLargeSeconds, c9}, {10, 0, c10},            {11, 0, c11},          {12, 0, c12},
      {13, 0, c13},           {14, 0, c14},            {15, 0, c15},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.check();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit > 0 && secs > c.limit) {
      r.pass = false;
      r.detail += " over the time limit";
    }
    std::printf("criterion %d: %s %.2fs %s\n", c.id, r.pass ? "PASS" : "FAIL", secs, r.detail.c_str());
    failed += !r.pass;
  }
  std::printf("%d of 15 criteria passed\n", 15 - failed);
  return failed == 0 ? 0 : 1;
}
