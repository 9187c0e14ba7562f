#include "mayer/completion.h"

#include "mayer/bracket.h"
#include "mayer/print.h"
#include "mayer/rational_nf.h"
#include "mayer/zero.h"

namespace mayer {

const char* compat_name(Compat c) {
  switch (c) {
    case Compat::Compatible:
      return "compatible";
    case Compat::Incompatible:
      return "incompatible";
    case Compat::Unsupported:
      return "unsupported";
  }
  return "?";
}

BracketClass classify_bracket(const Expr& b, const PdeSystem& sys, std::uint64_t seed, bool* probabilistic) {
  ZeroVerdict v = is_zero(b, seed);
  if (probabilistic && (v == ZeroVerdict::ProbablyZero || v == ZeroVerdict::ProbablyNonZero)) {
    *probabilistic = true;
  }
  if (zero_like(v)) return BracketClass::Zero;
  if (v == ZeroVerdict::Unknown) return BracketClass::Undecided;
  return contains_derivative(b, sys) ? BracketClass::NewEquation : BracketClass::ObstructionXZ;
}

namespace {

/// Affine in the derivatives, each occurring only as a bare symbol.
bool quasilinear(const Expr& e, const PdeSystem& sys) {
  KernelTable t;
  t.scan(e);
  RationalNF f = t.convert(e);
  std::vector<int> idx;
  for (std::size_t i = 0; i < sys.n(); ++i) {
    auto uses = t.variables_mentioning({sys.p_name(i)});
    if (uses.empty()) continue;
    int k = t.index_of(sys.p(i));
    if (uses.size() != 1 || k < 0 || uses[0] != k || f.denominator.uses(k)) return false;
    idx.push_back(k);
  }
  for (const Term& term : f.numerator.terms()) {
    int deg = 0;
    for (int k : idx) deg += term.exps[static_cast<std::size_t>(k)];
    if (deg > 1) return false;
  }
  return true;
}

/// The bracket with plain partial x-derivatives, dropping the p_k dF/dz
/// term of the total derivative.
Expr partial_bracket(const Expr& f, const Expr& g, const PdeSystem& sys) {
  std::vector<Expr> terms;
  for (std::size_t k = 0; k < sys.n(); ++k) {
    const std::string& x = sys.vars[k];
    const std::string p = sys.p_name(k);
    terms.push_back(differentiate(f, x) * differentiate(g, p) - differentiate(g, x) * differentiate(f, p));
  }
  return normalize(add(std::move(terms)));
}

const char* class_name(BracketClass c) {
  switch (c) {
    case BracketClass::Zero:
      return "zero";
    case BracketClass::ObstructionXZ:
      return "obstruction";
    case BracketClass::NewEquation:
      return "new equation";
    case BracketClass::Undecided:
      return "undecided";
  }
  return "?";
}

}  // namespace

CompatReport complete(const PdeSystem& sys, const SolveOptions& opts) {
  CompatReport rep;
  rep.completed = sys;
  int max_rounds = opts.max_rounds.value_or(static_cast<int>(sys.n()));
  std::set<std::string> pnames = sys.p_names();
  auto keep = [&](const Expr& k) { return contains_any_symbol(k, pnames); };

  for (int round = 1;; ++round) {
    opts.check_deadline();
    if (round > max_rounds) {
      rep.verdict = Compat::Unsupported;
      rep.reason = "round limit " + std::to_string(max_rounds) + " reached";
      rep.trace.push_back(rep.reason);
      return rep;
    }
    rep.rounds = round;
    PdeSystem& cur = rep.completed;
    DerivSolve pivots;
    auto brackets = restricted_brackets(cur, &pivots);
    bool has_z = false;
    for (const Expr& e : cur.equations) has_z = has_z || contains_symbol(e, cur.unknown);
    if (!brackets) {
      rep.verdict = Compat::Unsupported;
      rep.reason = "cannot solve the system for its derivatives";
      rep.trace.push_back("round " + std::to_string(round) + ": " + rep.reason);
      return rep;
    }
    std::vector<Expr> fresh;
    for (const BracketValue& b : *brackets) {
      std::string tag = "round " + std::to_string(round) + ": [F" + std::to_string(b.i + 1) + ", F" +
                        std::to_string(b.j + 1) + "] = ";
      BracketClass cls = classify_bracket(b.restricted, cur, opts.seed, &rep.probabilistic);
      if (has_z) {
        Expr lit = normalize(substitute(partial_bracket(cur.equations[b.i], cur.equations[b.j], cur), pivots.pivots));
        BracketClass other = classify_bracket(lit, cur, opts.seed);
        if (other != cls) {
          rep.trace.push_back(tag + "partial-derivative form would be " + std::string(class_name(other)) +
                              ", total-derivative form is " + class_name(cls));
        }
      }
      switch (cls) {
        case BracketClass::Zero:
          rep.trace.push_back(tag + "0");
          break;
        case BracketClass::Undecided:
          rep.trace.push_back(tag + to_string(b.restricted) + " (undecided)");
          rep.verdict = Compat::Unsupported;
          rep.reason = "zero test undecided for a bracket";
          return rep;
        case BracketClass::ObstructionXZ:
          rep.trace.push_back(tag + to_string(b.restricted) + " (obstruction)");
          rep.verdict = Compat::Incompatible;
          rep.witness = b.restricted;
          rep.reason = "bracket free of derivatives does not vanish";
          return rep;
        case BracketClass::NewEquation: {
          // The raw bracket agrees with the restricted one on solutions of
          // the system; prefer it when only it is linear in the derivatives.
          const Expr& src = !quasilinear(b.restricted, cur) && quasilinear(b.raw, cur) ? b.raw : b.restricted;
          Expr e = strip_content(src, keep);
          rep.trace.push_back(tag + to_string(b.restricted) + " (new equation " + to_string(e) + ")");
          bool dup = false;
          for (const Expr& x : cur.equations) dup = dup || proportional(e, x);
          for (const Expr& x : fresh) dup = dup || proportional(e, x);
          if (!dup) fresh.push_back(e);
          break;
        }
      }
    }
    if (fresh.empty()) {
      rep.verdict = Compat::Compatible;
      return rep;
    }
    if (cur.m() + fresh.size() > cur.n()) {
      rep.verdict = Compat::Incompatible;
      rep.reason = "equation count " + std::to_string(cur.m() + fresh.size()) + " would exceed " +
                   std::to_string(cur.n()) + " variables";
      rep.trace.push_back(rep.reason + "; the count bound is applied as a cutoff and may reject a consistent system");
      return rep;
    }
    std::vector<Expr> eqs = fresh;
    eqs.insert(eqs.end(), cur.equations.begin(), cur.equations.end());
    cur.equations = std::move(eqs);
    rep.added.insert(rep.added.end(), fresh.begin(), fresh.end());
  }
}

}  // namespace mayer
