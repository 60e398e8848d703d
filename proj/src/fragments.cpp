#include "olt/fragments.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace olt {

std::string to_string(FragmentLabel l) {
  switch (l) {
    case FragmentLabel::FO: return "FO";
    case FragmentLabel::GF: return "GF";
    case FragmentLabel::L_pre: return "L_pre";
    case FragmentLabel::L_suf: return "L_suf";
    case FragmentLabel::L_inf: return "L_inf";
    case FragmentLabel::G_pre: return "G_pre";
    case FragmentLabel::G_suf: return "G_suf";
    case FragmentLabel::G_inf: return "G_inf";
  }
  return "?";
}

FragmentLabel fragment_from_string(const std::string& s) {
  static const std::map<std::string, FragmentLabel> m = {
      {"FO", FragmentLabel::FO},       {"GF", FragmentLabel::GF},
      {"L_pre", FragmentLabel::L_pre}, {"L_suf", FragmentLabel::L_suf},
      {"L_inf", FragmentLabel::L_inf}, {"G_pre", FragmentLabel::G_pre},
      {"G_suf", FragmentLabel::G_suf}, {"G_inf", FragmentLabel::G_inf},
      {"pre", FragmentLabel::L_pre},   {"suf", FragmentLabel::L_suf},
      {"inf", FragmentLabel::L_inf},   {"gpre", FragmentLabel::G_pre},
      {"gsuf", FragmentLabel::G_suf},  {"ginf", FragmentLabel::G_inf}};
  auto it = m.find(s);
  if (it == m.end()) throw std::invalid_argument("unknown fragment label: " + s);
  return it->second;
}

AffixKind affix_kind_of(FragmentLabel l) {
  switch (l) {
    case FragmentLabel::L_pre:
    case FragmentLabel::G_pre: return AffixKind::Prefix;
    case FragmentLabel::L_suf:
    case FragmentLabel::G_suf: return AffixKind::Suffix;
    case FragmentLabel::L_inf:
    case FragmentLabel::G_inf: return AffixKind::Infix;
    default: throw std::invalid_argument("no affix kind for " + to_string(l));
  }
}

bool is_guarded_label(FragmentLabel l) {
  return l == FragmentLabel::GF || l == FragmentLabel::G_pre || l == FragmentLabel::G_suf ||
         l == FragmentLabel::G_inf;
}

namespace {

// Atom argument lists in the ordered fragments are consecutive ascending
// runs x_i, x_{i+1}, ..., x_j.
bool consecutive_run(const std::vector<int>& args, int& lo, int& hi) {
  lo = args.front();
  hi = args.back();
  for (size_t i = 1; i < args.size(); ++i)
    if (args[i] != args[i - 1] + 1) return false;
  return true;
}

bool mem_suf(const FormulaPtr& f, int n) {
  switch (f->kind) {
    case Kind::Atom: {
      int lo, hi;
      if (!consecutive_run(f->args, lo, hi)) return false;
      return hi == n;  // suffix of x_1..x_n ends exactly at n
    }
    case Kind::Not:
      return mem_suf(f->kids[0], n);
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      return mem_suf(f->kids[0], n) && mem_suf(f->kids[1], n);
    case Kind::Exists:
    case Kind::Forall:
      return f->var == n + 1 && mem_suf(f->kids[0], n + 1);
  }
  return false;
}

// Monotone membership for L_pre / L_inf: the boolean clause lifts the
// pieces to any common level, so mem(f, n) implies mem(f, n') for n' >= n.
bool mem_pre_inf(const FormulaPtr& f, int n, bool prefix) {
  switch (f->kind) {
    case Kind::Atom: {
      int lo, hi;
      if (!consecutive_run(f->args, lo, hi)) return false;
      if (hi > n) return false;
      return !prefix || lo == 1;
    }
    case Kind::Not:
      return mem_pre_inf(f->kids[0], n, prefix);
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      return mem_pre_inf(f->kids[0], n, prefix) && mem_pre_inf(f->kids[1], n, prefix);
    case Kind::Exists:
    case Kind::Forall:
      // Q x_k phi lives in L(k-1) with phi in L(k); requantification means
      // k may be any index <= n+1.
      return f->var <= n + 1 && mem_pre_inf(f->kids[0], f->var, prefix);
  }
  return false;
}

// GF quantifier patterns: try every same-kind quantifier block length; the
// body must be alpha -> phi (forall) or alpha /\ phi (exists) with an atom
// guard covering phi's free variables, or the single-variable clause.
bool gf_rec(const FormulaPtr& f, std::map<const Formula*, bool>& memo);

bool gf_quantifier(const FormulaPtr& f, std::map<const Formula*, bool>& memo) {
  Kind q = f->kind;
  FormulaPtr body = f;
  int block_len = 0;
  while (body->kind == q) {
    ++block_len;
    body = body->kids[0];
    // Guard-shaped reading with the block ending here.
    FormulaPtr guard, inner;
    if (q == Kind::Forall && body->kind == Kind::Implies) {
      guard = body->kids[0];
      inner = body->kids[1];
    } else if (q == Kind::Exists && body->kind == Kind::And) {
      guard = body->kids[0];
      inner = body->kids[1];
    }
    if (guard && guard->is_atom()) {
      auto fv = free_variables(inner);
      std::set<int> gv(guard->args.begin(), guard->args.end());
      bool covered = std::all_of(fv.begin(), fv.end(), [&](int v) { return gv.count(v) != 0; });
      if (covered && gf_rec(inner, memo)) return true;
    }
    if (block_len == 1) {
      auto fv = free_variables(body);
      bool single = std::all_of(fv.begin(), fv.end(), [&](int v) { return v == f->var; });
      if (single && gf_rec(body, memo)) return true;
    }
    if (!body->is_quantifier()) break;
  }
  return false;
}

bool gf_rec(const FormulaPtr& f, std::map<const Formula*, bool>& memo) {
  auto it = memo.find(f.get());
  if (it != memo.end()) return it->second;
  bool r = false;
  switch (f->kind) {
    case Kind::Atom:
      r = true;
      break;
    case Kind::Not:
      r = gf_rec(f->kids[0], memo);
      break;
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      r = gf_rec(f->kids[0], memo) && gf_rec(f->kids[1], memo);
      break;
    case Kind::Exists:
    case Kind::Forall:
      r = gf_quantifier(f, memo);
      break;
  }
  memo[f.get()] = r;
  return r;
}

}  // namespace

bool is_guarded(const FormulaPtr& f) {
  std::map<const Formula*, bool> memo;
  return gf_rec(f, memo);
}

bool depth_membership(const FormulaPtr& f, int n, FragmentLabel frag) {
  switch (frag) {
    case FragmentLabel::FO:
      throw std::invalid_argument("depth_membership: frag must not be FO");
    case FragmentLabel::GF:
      return is_guarded(f);
    case FragmentLabel::L_suf:
      return mem_suf(f, n);
    case FragmentLabel::L_pre:
      return mem_pre_inf(f, n, true);
    case FragmentLabel::L_inf:
      return mem_pre_inf(f, n, false);
    case FragmentLabel::G_suf:
      return mem_suf(f, n) && is_guarded(f);
    case FragmentLabel::G_pre:
      return mem_pre_inf(f, n, true) && is_guarded(f);
    case FragmentLabel::G_inf:
      return mem_pre_inf(f, n, false) && is_guarded(f);
  }
  return false;
}

std::set<FragmentLabel> classify(const FormulaPtr& f) {
  std::set<FragmentLabel> out{FragmentLabel::FO};
  bool gf = is_guarded(f);
  if (gf) out.insert(FragmentLabel::GF);
  if (!free_variables(f).empty()) return out;  // L_affix := L_affix(0) holds sentences only
  struct {
    FragmentLabel l, g;
  } pairs[] = {{FragmentLabel::L_pre, FragmentLabel::G_pre},
               {FragmentLabel::L_suf, FragmentLabel::G_suf},
               {FragmentLabel::L_inf, FragmentLabel::G_inf}};
  for (auto [l, g] : pairs) {
    if (depth_membership(f, 0, l)) {
      out.insert(l);
      if (gf) out.insert(g);
    }
  }
  return out;
}

}  // namespace olt
