#include "olt/rewriter.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "olt/evaluator.hpp"

namespace olt {

namespace {

bool contains_var(const FormulaPtr& f, int v) {
  auto fv = free_variables(f);
  return std::binary_search(fv.begin(), fv.end(), v);
}

// ---- boolean layer with constants -------------------------------------

// Null formula means a constant.
struct FB {
  FormulaPtr f;
  bool c = false;
  static FB of(FormulaPtr g) { return {std::move(g), false}; }
  static FB constant(bool b) { return {nullptr, b}; }
  bool is_const() const { return f == nullptr; }
};

FB fb_not(const FB& a) { return a.is_const() ? FB::constant(!a.c) : FB::of(mk_not(a.f)); }

FB fb_and(const FB& a, const FB& b) {
  if (a.is_const()) return a.c ? b : a;
  if (b.is_const()) return b.c ? a : b;
  return FB::of(mk_and(a.f, b.f));
}

FB fb_or(const FB& a, const FB& b) {
  if (a.is_const()) return a.c ? a : b;
  if (b.is_const()) return b.c ? b : a;
  return FB::of(mk_or(a.f, b.f));
}

FB fb_implies(const FB& a, const FB& b) {
  if (a.is_const()) return a.c ? b : FB::constant(true);
  if (b.is_const()) return b.c ? b : FB::of(mk_not(a.f));
  return FB::of(mk_implies(a.f, b.f));
}

// ---- NNF / DNF / CNF over opaque literals ------------------------------

// Literals are atoms, quantified subformulas, or negations of those.
FormulaPtr nnf(const FormulaPtr& f, bool positive) {
  switch (f->kind) {
    case Kind::Atom:
    case Kind::Exists:
    case Kind::Forall:
      return positive ? f : mk_not(f);
    case Kind::Not:
      return nnf(f->kids[0], !positive);
    case Kind::And: {
      auto a = nnf(f->kids[0], positive), b = nnf(f->kids[1], positive);
      return positive ? mk_and(a, b) : mk_or(a, b);
    }
    case Kind::Or: {
      auto a = nnf(f->kids[0], positive), b = nnf(f->kids[1], positive);
      return positive ? mk_or(a, b) : mk_and(a, b);
    }
    case Kind::Implies: {
      auto a = nnf(f->kids[0], !positive), b = nnf(f->kids[1], positive);
      return positive ? mk_or(a, b) : mk_and(a, b);
    }
  }
  return f;
}

using Clause = std::vector<FormulaPtr>;  // conjunction (DNF) or disjunction (CNF) of literals

void dedup(Clause& c) {
  std::sort(c.begin(), c.end(),
            [](const FormulaPtr& a, const FormulaPtr& b) { return print_formula(a) < print_formula(b); });
  c.erase(std::unique(c.begin(), c.end(),
                      [](const FormulaPtr& a, const FormulaPtr& b) { return equal(a, b); }),
          c.end());
}

// f must be in NNF with opaque quantifier literals. conjunctive = true
// computes DNF (clauses are conjunctions), false computes CNF.
std::vector<Clause> normal_clauses(const FormulaPtr& f, bool dnf) {
  Kind distribute = dnf ? Kind::Or : Kind::And;    // concatenates clause lists
  Kind cross = dnf ? Kind::And : Kind::Or;         // crosses clause lists
  if (f->kind == distribute) {
    auto a = normal_clauses(f->kids[0], dnf);
    auto b = normal_clauses(f->kids[1], dnf);
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }
  if (f->kind == cross) {
    auto a = normal_clauses(f->kids[0], dnf);
    auto b = normal_clauses(f->kids[1], dnf);
    std::vector<Clause> out;
    for (auto& x : a)
      for (auto& y : b) {
        Clause c = x;
        c.insert(c.end(), y.begin(), y.end());
        dedup(c);
        out.push_back(std::move(c));
      }
    return out;
  }
  return {Clause{f}};
}

FormulaPtr rebuild_clause(const Clause& c, bool conjunction) {
  return conjunction ? mk_conj(c) : mk_disj(c);
}

// ---- to_suffix_form -----------------------------------------------------

FormulaPtr suffix_rec(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::Atom:
      return f;
    case Kind::Not:
      return mk_not(suffix_rec(f->kids[0]));
    case Kind::And:
      return mk_and(suffix_rec(f->kids[0]), suffix_rec(f->kids[1]));
    case Kind::Or:
      return mk_or(suffix_rec(f->kids[0]), suffix_rec(f->kids[1]));
    case Kind::Implies:
      return mk_implies(suffix_rec(f->kids[0]), suffix_rec(f->kids[1]));
    case Kind::Exists:
    case Kind::Forall: {
      bool ex = f->kind == Kind::Exists;
      int v = f->var;
      auto body = nnf(suffix_rec(f->kids[0]), true);
      auto clauses = normal_clauses(body, ex);
      std::vector<FormulaPtr> parts;
      for (auto& cl : clauses) {
        Clause in, out;
        for (auto& lit : cl) (contains_var(lit, v) ? in : out).push_back(lit);
        FormulaPtr kept;
        if (!in.empty()) {
          auto inner = rebuild_clause(in, ex);
          kept = ex ? mk_exists(v, inner) : mk_forall(v, inner);
        }
        FormulaPtr outer = out.empty() ? nullptr : rebuild_clause(out, ex);
        FormulaPtr part = !outer ? kept : (!kept ? outer : (ex ? mk_and(outer, kept) : mk_or(outer, kept)));
        parts.push_back(part);
      }
      return ex ? mk_disj(parts) : mk_conj(parts);
    }
  }
  return f;
}

}  // namespace

FormulaPtr to_suffix_form(const FormulaPtr& f) {
  if (!free_variables(f).empty()) throw std::invalid_argument("to_suffix_form needs a sentence");
  if (!depth_membership(f, 0, FragmentLabel::L_inf))
    throw std::invalid_argument("input not in L_inf");
  auto out = suffix_rec(f);
  if (!depth_membership(out, 0, FragmentLabel::L_suf))
    throw std::logic_error("to_suffix_form produced a non-L_suf formula: " + print_formula(out));
  return out;
}

FormulaPtr shift_vars(const FormulaPtr& f, int delta) {
  switch (f->kind) {
    case Kind::Atom: {
      std::vector<int> args;
      for (int a : f->args) args.push_back(a + delta);
      return mk_atom(f->rel, args);
    }
    case Kind::Not:
      return mk_not(shift_vars(f->kids[0], delta));
    case Kind::And:
      return mk_and(shift_vars(f->kids[0], delta), shift_vars(f->kids[1], delta));
    case Kind::Or:
      return mk_or(shift_vars(f->kids[0], delta), shift_vars(f->kids[1], delta));
    case Kind::Implies:
      return mk_implies(shift_vars(f->kids[0], delta), shift_vars(f->kids[1], delta));
    case Kind::Exists:
      return mk_exists(f->var + delta, shift_vars(f->kids[0], delta));
    case Kind::Forall:
      return mk_forall(f->var + delta, shift_vars(f->kids[0], delta));
  }
  return f;
}

namespace {

FormulaPtr head_atom(const std::string& head, int arity) {
  std::vector<int> args;
  for (int i = 1; i <= arity; ++i) args.push_back(i);
  return mk_atom(head, args);
}

FormulaPtr forall_prefix(int upto, FormulaPtr body) {
  for (int v = upto; v >= 1; --v) body = mk_forall(v, body);
  return body;
}

// H(x_bar) /\ forall x_bar (H -> phi), or the unary-existential sentence form.
std::pair<FormulaPtr, FormulaPtr> head_pair(const FormulaPtr& phi, const std::string& head,
                                            FragmentLabel logic) {
  auto fv = free_variables(phi);
  if (fv.empty()) {
    auto body = affix_kind_of(logic) == AffixKind::Suffix ? shift_vars(phi, 1) : phi;
    auto head_c = mk_exists(1, head_atom(head, 1));
    auto guard_c = mk_forall(1, mk_implies(head_atom(head, 1), body));
    return {head_c, guard_c};
  }
  for (size_t i = 0; i < fv.size(); ++i)
    if (fv[i] != static_cast<int>(i) + 1)
      throw std::invalid_argument("free variables must be x1..xk for head introduction");
  int k = static_cast<int>(fv.size());
  auto head_c = head_atom(head, k);
  auto guard_c = forall_prefix(k, mk_implies(head_atom(head, k), phi));
  return {head_c, guard_c};
}

}  // namespace

std::pair<FormulaPtr, FormulaPtr> introduce_head(const FormulaPtr& phi, const FormulaPtr& psi,
                                                 const std::string& head, FragmentLabel logic) {
  if (sig_of(phi).has(head) || sig_of(psi).has(head))
    throw std::invalid_argument("head symbol " + head + " already occurs in a signature");
  if (free_variables(phi) != free_variables(psi))
    throw std::invalid_argument("introduce_head: the formulas must share their free tuple");
  auto [h1, g1] = head_pair(phi, head, logic);
  auto [h2, g2] = head_pair(psi, head, logic);
  return {mk_and(h1, g1), mk_and(h2, g2)};
}

// ---- normal form infrastructure ----------------------------------------

FormulaPtr NormalForm::assemble() const {
  std::vector<FormulaPtr> parts;
  if (head_conjunct) parts.push_back(head_conjunct);
  for (auto& f : existential) parts.push_back(f);
  for (auto& f : universal) parts.push_back(f);
  for (auto& f : residual) parts.push_back(f);
  return mk_conj(parts);
}

namespace {

void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == Kind::And) {
    flatten_and(f->kids[0], out);
    flatten_and(f->kids[1], out);
  } else {
    out.push_back(f);
  }
}

bool quantifier_free(const FormulaPtr& f) { return quantifier_rank(f) == 0; }

// Classify one conjunct by its maximal quantifier prefix, descending through
// premises: forall* then an exists makes it existential.
enum class ReqKind { Existential, Universal, Other };

ReqKind req_kind(const FormulaPtr& f) {
  FormulaPtr g = f;
  bool saw_forall = false;
  while (true) {
    if (g->kind == Kind::Forall) {
      saw_forall = true;
      g = g->kids[0];
    } else if (g->kind == Kind::Implies) {
      g = g->kids[1];
    } else if (g->kind == Kind::Exists) {
      return ReqKind::Existential;
    } else if (g->kind == Kind::Not && g->kids[0]->is_quantifier()) {
      // a negated block counts as its dual
      return g->kids[0]->kind == Kind::Forall ? ReqKind::Existential : ReqKind::Universal;
    } else {
      return saw_forall ? ReqKind::Universal : ReqKind::Other;
    }
  }
}

}  // namespace

std::pair<std::vector<FormulaPtr>, std::vector<FormulaPtr>> extract_requirements(
    const FormulaPtr& f) {
  std::vector<FormulaPtr> conjuncts, ex, un;
  flatten_and(f, conjuncts);
  for (auto& c : conjuncts) {
    switch (req_kind(c)) {
      case ReqKind::Existential: ex.push_back(c); break;
      case ReqKind::Universal: un.push_back(c); break;
      case ReqKind::Other: break;
    }
  }
  return {ex, un};
}

std::pair<std::vector<FormulaPtr>, std::vector<FormulaPtr>> extract_requirements(
    const NormalForm& nf) {
  return {nf.existential, nf.universal};
}

std::optional<PreReq> parse_pre_requirement(const FormulaPtr& f) {
  PreReq r;
  r.formula = f;
  FormulaPtr g = f;
  while (g->kind == Kind::Forall && g->var == r.ell + 1) {
    ++r.ell;
    g = g->kids[0];
  }
  if (g->kind == Kind::Implies && quantifier_free(g->kids[0])) {
    r.premise = g->kids[0];
    g = g->kids[1];
  }
  if (g->is_quantifier() && g->var == r.ell + 1 && quantifier_free(g->kids[0])) {
    r.exists_kind = g->kind == Kind::Exists;
    r.body = g->kids[0];
    return r;
  }
  // Pure universal requirement: the whole stripped body is quantifier-free.
  if (!r.premise && quantifier_free(g) && r.ell >= 1) {
    r.exists_kind = false;
    r.ell -= 1;  // read forall x1..xm beta as ell = m-1 with the last var re-quantified
    r.body = g;
    return r;
  }
  if (r.premise && quantifier_free(g)) {
    r.exists_kind = false;
    r.body = g;  // forall x1..xl (alpha -> beta) with beta not quantifying further
    return r;
  }
  return std::nullopt;
}

namespace {

// Existential block: run of exists binding consecutive variables, body
// (S /\ lambda) or a lone guard atom.
struct ExBlock {
  int lo = 0, hi = 0;   // bound variables x_lo..x_hi
  FormulaPtr guard;     // atom
  FormulaPtr body;      // may be null (lone guard)
};

std::optional<ExBlock> parse_ex_block(const FormulaPtr& f) {
  if (f->kind != Kind::Exists) return std::nullopt;
  ExBlock b;
  b.lo = f->var;
  FormulaPtr g = f;
  int expect = f->var;
  while (g->kind == Kind::Exists && g->var == expect) {
    b.hi = g->var;
    g = g->kids[0];
    ++expect;
  }
  if (g->kind == Kind::Exists) return std::nullopt;  // non-consecutive block
  if (g->is_atom()) {
    b.guard = g;
    return b;
  }
  if (g->kind == Kind::And && g->kids[0]->is_atom()) {
    b.guard = g->kids[0];
    b.body = g->kids[1];
    return b;
  }
  return std::nullopt;
}

bool is_prefix_run_atom(const FormulaPtr& a, int lo, int hi) {
  if (!a->is_atom()) return false;
  if (static_cast<int>(a->args.size()) != hi - lo + 1) return false;
  for (int i = 0; i < static_cast<int>(a->args.size()); ++i)
    if (a->args[i] != lo + i) return false;
  return true;
}

}  // namespace

std::optional<GuardedReq> parse_guarded_requirement(const FormulaPtr& f) {
  GuardedReq r;
  r.formula = f;
  FormulaPtr g = f;
  while (g->kind == Kind::Forall && g->var == r.ell + 1) {
    ++r.ell;
    g = g->kids[0];
  }
  if (r.ell > 0) {
    if (g->kind != Kind::Implies) return std::nullopt;
    auto guard = g->kids[0];
    if (!is_prefix_run_atom(guard, 1, r.ell)) return std::nullopt;
    r.all_guard = guard;
    g = g->kids[1];
    if (g->kind == Kind::Implies && quantifier_free(g->kids[0])) {
      r.premise = g->kids[0];
      g = g->kids[1];
    }
  }
  if (auto b = parse_ex_block(g)) {
    if (b->lo != r.ell + 1) return std::nullopt;
    r.exists_kind = true;
    r.block_len = b->hi - b->lo + 1;
    r.ex_guard = b->guard;
    r.body = b->body;
    return r;
  }
  if (quantifier_free(g)) {
    r.exists_kind = false;
    r.body = g;
    return r;
  }
  // Nested universal block: forall x_{l+1}.. (T -> psi').
  int ell2 = r.ell;
  FormulaPtr h = g;
  while (h->kind == Kind::Forall && h->var == ell2 + 1) {
    ++ell2;
    h = h->kids[0];
  }
  if (ell2 > r.ell && h->kind == Kind::Implies && h->kids[0]->is_atom() &&
      quantifier_free(h->kids[1])) {
    r.exists_kind = false;
    r.block_len = 0;
    r.body = h->kids[1];
    return r;
  }
  return std::nullopt;
}

// ---- shape validation ----------------------------------------------------

namespace {

bool parse_head_conjunct(const FormulaPtr& c, const std::vector<int>& fv, NormalForm& nf) {
  if (c->is_atom() && !fv.empty() && c->args.size() == fv.size()) {
    for (size_t i = 0; i < fv.size(); ++i)
      if (c->args[i] != fv[i]) return false;
    nf.head = c->rel;
    nf.head_arity = static_cast<int>(c->args.size());
    nf.sentence_head = false;
    nf.head_conjunct = c;
    return true;
  }
  if (fv.empty() && c->kind == Kind::Exists && c->var == 1 && c->kids[0]->is_atom() &&
      c->kids[0]->args == std::vector<int>{1}) {
    nf.head = c->kids[0]->rel;
    nf.head_arity = 1;
    nf.sentence_head = true;
    nf.head_conjunct = c;
    return true;
  }
  return false;
}

}  // namespace

std::optional<NormalForm> matches_nform_pre(const FormulaPtr& f) {
  std::vector<FormulaPtr> conjuncts;
  flatten_and(f, conjuncts);
  NormalForm nf;
  auto fv = free_variables(f);
  size_t start = 0;
  if (!conjuncts.empty() && parse_head_conjunct(conjuncts[0], fv, nf)) start = 1;
  if (!nf.head_conjunct) return std::nullopt;
  for (size_t i = start; i < conjuncts.size(); ++i) {
    auto r = parse_pre_requirement(conjuncts[i]);
    if (!r) return std::nullopt;
    (r->exists_kind ? nf.existential : nf.universal).push_back(conjuncts[i]);
  }
  return nf;
}

std::optional<NormalForm> matches_nform_guarded(const FormulaPtr& f, AffixKind kind) {
  (void)kind;  // runs x_1..x_m are valid affixes for every kind
  std::vector<FormulaPtr> conjuncts;
  flatten_and(f, conjuncts);
  NormalForm nf;
  auto fv = free_variables(f);
  size_t start = 0;
  if (!conjuncts.empty() && parse_head_conjunct(conjuncts[0], fv, nf)) start = 1;
  if (!nf.head_conjunct) return std::nullopt;
  for (size_t i = start; i < conjuncts.size(); ++i) {
    auto r = parse_guarded_requirement(conjuncts[i]);
    if (!r) return std::nullopt;
    if (r->body && !quantifier_free(r->body)) return std::nullopt;
    (r->exists_kind ? nf.existential : nf.universal).push_back(conjuncts[i]);
  }
  return nf;
}

// ---- the two normal-formers ----------------------------------------------

namespace {

struct Normalizer {
  NormalizeOptions opt;
  AffixKind kind;
  bool guarded;
  Signature base_sig;
  int fresh_counter = 0;
  NormalForm nf;
  std::optional<Structure> ref_ext;  // reference extended with fresh symbols

  std::string fresh_name() {
    std::string n;
    do {
      n = opt.fresh_prefix + std::to_string(++fresh_counter);
    } while (base_sig.has(n));
    return n;
  }

  // Evaluate a closed block on the extended reference.
  bool test_on_reference(const FormulaPtr& sentence) {
    if (!ref_ext)
      throw std::invalid_argument(
          "a sentence-level subformula arose and no reference structure was supplied");
    return eval_sentence(*ref_ext, sentence);
  }

  void extend_reference(const std::string& name, int arity, const FormulaPtr& defining) {
    if (!ref_ext) return;
    Structure& s = *ref_ext;
    s.sig.add(name, arity);
    s.rels.emplace_back();
    int n = static_cast<int>(s.dom.size());
    Tuple t(arity, 0);
    while (true) {
      Assignment env;
      for (int i = 0; i < arity; ++i) env[i + 1] = t[i];
      if (eval_naive(s, env, defining)) s.rels.back().insert(t);
      int i = arity - 1;
      while (i >= 0 && t[i] == n - 1) t[i--] = 0;
      if (i < 0) break;
      ++t[i];
    }
  }

  void append_req(const FormulaPtr& f, bool exists_kind) {
    (exists_kind ? nf.existential : nf.universal).push_back(f);
  }

  // Append a closed quantified conjunct (or its negation) in requirement shape.
  void append_sentence(const FormulaPtr& chi, bool positive) {
    if (positive) {
      append_req(chi, req_kind(chi) == ReqKind::Existential);
      return;
    }
    auto neg = nnf(mk_not(chi), true);     // pushes the negation through the block
    neg = negated_block_to_req(mk_not(chi));
    append_req(neg, req_kind(neg) == ReqKind::Existential);
  }

  // not (Q x block) -> dual block with negated quantifier-free core.
  FormulaPtr negated_block_to_req(const FormulaPtr& f) {
    if (f->kind == Kind::Not) {
      auto g = f->kids[0];
      if (g->kind == Kind::Exists)
        return mk_forall(g->var, negated_block_to_req(mk_not(g->kids[0])));
      if (g->kind == Kind::Forall)
        return mk_exists(g->var, negated_block_to_req(mk_not(g->kids[0])));
      if (g->kind == Kind::And && g->kids[0]->is_atom())
        return mk_implies(g->kids[0], negated_block_to_req(mk_not(g->kids[1])));
      return nnf(f, true);
    }
    return f;
  }
};

// ------------------------- L_pre ------------------------------------------

struct PreNormalizer : Normalizer {
  // Returns the processed subformula with quantified parts replaced.
  FB process(const FormulaPtr& f, bool positive) {
    switch (f->kind) {
      case Kind::Atom:
        return FB::of(f);
      case Kind::Not:
        return fb_not(process(f->kids[0], !positive));
      case Kind::And:
        return fb_and(process(f->kids[0], positive), process(f->kids[1], positive));
      case Kind::Or:
        return fb_or(process(f->kids[0], positive), process(f->kids[1], positive));
      case Kind::Implies:
        return fb_implies(process(f->kids[0], !positive), process(f->kids[1], positive));
      case Kind::Exists:
      case Kind::Forall:
        return quantified(f, positive);
    }
    return FB::constant(false);
  }

  FB quantified(const FormulaPtr& f, bool positive) {
    bool ex = f->kind == Kind::Exists;
    int k = f->var;
    FB inner = process(f->kids[0], positive);
    if (inner.is_const()) {
      // exists x (c) == c over nonempty domains, same for forall
      return inner;
    }
    FormulaPtr lambda = inner.f;
    if (!contains_var(lambda, k)) return FB::of(lambda);  // vacuous quantifier
    FormulaPtr chi = ex ? mk_exists(k, lambda) : mk_forall(k, lambda);
    auto fv = free_variables(chi);
    if (fv.empty()) {
      bool holds = test_on_reference(chi);
      append_sentence(chi, holds);
      return FB::constant(holds);
    }
    // free(chi) must be x1..x_{k-1} in the prefix discipline
    if (fv.back() != k - 1 || fv.front() != 1 || static_cast<int>(fv.size()) != k - 1)
      throw std::invalid_argument("subformula free variables are not a prefix run: " +
                                  print_formula(chi));
    int m = k - 1;
    std::string r = fresh_name();
    nf.fresh.push_back(r);
    auto r_atom = head_atom(r, m);
    append_req(forall_prefix(m, mk_implies(r_atom, chi)), ex);
    append_req(forall_prefix(m, mk_implies(mk_not(r_atom),
                                           ex ? mk_forall(k, mk_not(lambda))
                                              : mk_exists(k, mk_not(lambda)))),
               !ex);
    extend_reference(r, m, chi);
    return FB::of(r_atom);
  }
};

// ------------------------- G_affix ----------------------------------------

struct GuardStackEntry {
  FormulaPtr atom;  // guard atom, args form a run
  int lo, hi;
};

struct GuardedNormalizer : Normalizer {
  std::vector<GuardStackEntry> guards;

  void push_guard(const FormulaPtr& atom) {
    guards.push_back({atom, atom->args.front(), atom->args.back()});
  }
  void pop_guard() { guards.pop_back(); }

  // innermost guard whose run covers [lo..hi]
  const GuardStackEntry* covering_guard(int lo, int hi) const {
    for (auto it = guards.rbegin(); it != guards.rend(); ++it)
      if (it->lo <= lo && hi <= it->hi) return &*it;
    return nullptr;
  }

  FB process(const FormulaPtr& f, bool positive) {
    switch (f->kind) {
      case Kind::Atom:
        return FB::of(f);
      case Kind::Not:
        return fb_not(process(f->kids[0], !positive));
      case Kind::And:
        return fb_and(process(f->kids[0], positive), process(f->kids[1], positive));
      case Kind::Or:
        return fb_or(process(f->kids[0], positive), process(f->kids[1], positive));
      case Kind::Implies:
        return fb_implies(process(f->kids[0], !positive), process(f->kids[1], positive));
      case Kind::Exists:
        return block(f, positive, true);
      case Kind::Forall:
        return block(f, positive, false);
    }
    return FB::constant(false);
  }

  // Parse Q x_lo .. Q x_hi with a guard; process the inner body; replace.
  FB block(const FormulaPtr& f, bool positive, bool ex) {
    int lo = f->var;
    int hi = lo - 1;
    FormulaPtr g = f;
    Kind q = f->kind;
    while (g->kind == q && g->var == hi + 1) {
      hi = g->var;
      g = g->kids[0];
    }
    FormulaPtr guard, inner;
    if (ex && g->kind == Kind::And && g->kids[0]->is_atom()) {
      guard = g->kids[0];
      inner = g->kids[1];
    } else if (!ex && g->kind == Kind::Implies && g->kids[0]->is_atom()) {
      guard = g->kids[0];
      inner = g->kids[1];
    } else if (ex && g->is_atom()) {
      guard = g;
      inner = nullptr;  // lone guard
    } else {
      // single-variable clause: body free variables inside {x_lo}
      if (hi == lo) {
        FB in = process(f->kids[0], positive);
        if (in.is_const()) return in;
        if (!contains_var(in.f, lo)) return in;
        FormulaPtr chi = ex ? mk_exists(lo, in.f) : mk_forall(lo, in.f);
        if (!free_variables(chi).empty())
          throw std::invalid_argument("unguarded quantifier with free variables: " +
                                      print_formula(chi));
        bool holds = test_on_reference(chi);
        append_sentence(chi, holds);
        return FB::constant(holds);
      }
      throw std::invalid_argument("quantifier block is not guard-shaped: " + print_formula(f));
    }
    // runs of the guard must be consecutive and cover the block end
    int glo, ghi;
    {
      auto& a = guard->args;
      glo = a.front();
      ghi = a.back();
      for (size_t i = 1; i < a.size(); ++i)
        if (a[i] != a[i - 1] + 1)
          throw std::invalid_argument("guard atom is not a consecutive run: " + print_formula(guard));
    }
    FB in_fb = inner ? (push_guard(guard), process_popping(inner, positive))
                     : FB::of(nullptr);
    FormulaPtr lambda;
    if (inner) {
      if (in_fb.is_const()) {
        if (ex && !in_fb.c) return FB::constant(false);   // exists (S /\ false)
        if (!ex && in_fb.c) return FB::constant(true);    // forall (S -> true)
        lambda = nullptr;  // body degenerated to the lone guard / its negation
        if (!ex) {
          // forall block (S -> false): keep as exists-free block with body = not S
          lambda = mk_not(guard);
        }
      } else {
        lambda = in_fb.f;
      }
    }
    return replace_block(ex, lo, hi, guard, glo, ghi, lambda, positive);
  }

  FB process_popping(const FormulaPtr& inner, bool positive) {
    FB r = process(inner, positive);
    pop_guard();
    return r;
  }

  // chi = Q x_lo..x_hi (guard ? lambda); replace by a fresh atom on the free
  // run, or resolve a closed block on the reference.
  FB replace_block(bool ex, int lo, int hi, const FormulaPtr& guard, int glo, int ghi,
                   FormulaPtr lambda, bool positive) {
    if (ghi != hi)
      throw std::invalid_argument("guard run does not reach the block end");
    auto mk_block = [&](bool as_exists, const FormulaPtr& g, const FormulaPtr& lam, int shift) {
      FormulaPtr core = lam ? (as_exists ? mk_and(g, lam) : mk_implies(g, lam))
                            : (as_exists ? g : mk_implies(g, g));
      FormulaPtr out = shift == 0 ? core : shift_vars(core, -shift);
      for (int v = hi - shift; v >= lo - shift; --v)
        out = as_exists ? mk_exists(v, out) : mk_forall(v, out);
      return out;
    };
    // normalize to an existential block: forall(S -> lam) == not exists(S /\ not lam)
    bool negated = !ex;
    FormulaPtr ex_lambda = lambda;
    if (!ex) ex_lambda = lambda ? nnf(mk_not(lambda), true) : mk_not(guard);
    FormulaPtr chi_ex_core = ex_lambda ? mk_and(guard, ex_lambda) : guard;
    FormulaPtr chi_ex = chi_ex_core;
    for (int v = hi; v >= lo; --v) chi_ex = mk_exists(v, chi_ex);

    auto fv = free_variables(chi_ex);
    if (fv.empty()) {
      bool holds = test_on_reference(chi_ex);
      append_sentence(chi_ex, holds);
      FB val = FB::constant(holds);
      return negated ? fb_not(val) : val;
    }
    // frees form a run [rlo .. lo-1]
    int rlo = fv.front(), rhi = fv.back();
    for (size_t i = 1; i < fv.size(); ++i)
      if (fv[i] != fv[i - 1] + 1)
        throw std::invalid_argument("block free variables are not a run: " + print_formula(chi_ex));
    if (rhi != lo - 1)
      throw std::invalid_argument("block free variables do not end at the block start");
    int m = rhi - rlo + 1;
    int shift = rlo - 1;
    std::string r = fresh_name();
    nf.fresh.push_back(r);
    std::vector<int> rargs;
    for (int v = rlo; v <= rhi; ++v) rargs.push_back(v);
    auto r_atom_local = mk_atom(r, rargs);                   // at the occurrence site
    auto r_atom_base = mk_atom(r, [&] {                      // shifted to x1..xm
      std::vector<int> a;
      for (int i = 1; i <= m; ++i) a.push_back(i);
      return a;
    }());

    // existential requirement: forall x1..xm (R -> exists-block shifted)
    append_req(forall_prefix(m, mk_implies(r_atom_base,
                                           mk_block(true, guard, ex_lambda, shift))),
               true);

    // reverse direction under the innermost covering guard
    const GuardStackEntry* sg = covering_guard(rlo, rhi);
    bool occurrence_negative = negated ? positive : !positive;
    // the occurrence of chi_ex is (positive XOR negated); we need chi -> R
    // whenever chi_ex can occur negatively in the final formula
    if (sg) {
      int s_lo = sg->lo, s_hi = sg->hi;
      int sshift = s_lo - 1;
      auto sguard = sshift == 0 ? sg->atom : shift_vars(sg->atom, -sshift);
      FormulaPtr not_r = mk_not(sshift == 0 ? r_atom_local : shift_vars(r_atom_local, -sshift));
      FormulaPtr inner_univ = mk_block(false, guard, ex_lambda ? nnf(mk_not(ex_lambda), true) : nullptr,
                                       sshift);
      FormulaPtr u = mk_implies(sguard, mk_implies(not_r, inner_univ));
      append_req(forall_prefix(s_hi - sshift, u), false);
      extend_reference(r, m, shift == 0 ? chi_ex : shift_vars(chi_ex, -shift));
    } else if (occurrence_negative) {
      throw std::invalid_argument(
          "no enclosing guard covers a negatively occurring block; cannot normalize " +
          print_formula(chi_ex));
    } else {
      extend_reference(r, m, shift == 0 ? chi_ex : shift_vars(chi_ex, -shift));
      nf.residual.push_back(nullptr);  // placeholder removed below; keeps count honest
      nf.residual.pop_back();
    }
    FB val = FB::of(r_atom_local);
    return negated ? fb_not(val) : val;
  }
};

}  // namespace

NormalForm to_normal_form_pre(const FormulaPtr& f, NormalizeOptions opt) {
  auto fv = free_variables(f);
  int level = fv.empty() ? 0 : fv.back();
  if (!depth_membership(f, level, FragmentLabel::L_pre))
    throw std::invalid_argument("input not in L_pre");
  if (auto ready = matches_nform_pre(f)) return *ready;

  PreNormalizer nz;
  nz.opt = opt;
  nz.kind = AffixKind::Prefix;
  nz.guarded = false;
  nz.base_sig = sig_of(f);
  if (!opt.head.empty() && nz.base_sig.has(opt.head))
    throw std::invalid_argument("head symbol already in signature");
  if (opt.reference) {
    if (!opt.reference->sig.contains(nz.base_sig))
      throw std::invalid_argument("reference structure signature too small");
    nz.ref_ext = *opt.reference;
  }

  auto [head_c, guard_c] = head_pair(f, opt.head, FragmentLabel::L_pre);
  nz.nf.head = opt.head;
  nz.nf.head_arity = fv.empty() ? 1 : static_cast<int>(fv.size());
  nz.nf.sentence_head = fv.empty();
  nz.nf.head_conjunct = head_c;

  // process the body of forall x_bar (H -> f)
  FB body = nz.process(f, true);
  int h = nz.nf.head_arity;
  if (body.is_const()) {
    if (!body.c)
      nz.nf.universal.push_back(forall_prefix(h, mk_not(head_atom(opt.head, h))));
    // true: the guarded conjunct is vacuous
  } else {
    nz.nf.universal.insert(nz.nf.universal.begin(),
                           forall_prefix(h, mk_implies(head_atom(opt.head, h), body.f)));
  }
  auto assembled = nz.nf.assemble();
  if (!matches_nform_pre(assembled))
    throw std::logic_error("normal form shape check failed: " + print_formula(assembled));
  return nz.nf;
}

NormalForm to_normal_form_guarded(const FormulaPtr& f, NormalizeOptions opt) {
  if (!is_guarded_label(opt.logic) || opt.logic == FragmentLabel::GF)
    throw std::invalid_argument("to_normal_form_guarded needs G_pre, G_suf or G_inf");
  auto fv = free_variables(f);
  int level = fv.empty() ? 0 : fv.back();
  if (!depth_membership(f, level, opt.logic))
    throw std::invalid_argument("input not in " + to_string(opt.logic));
  AffixKind kind = affix_kind_of(opt.logic);
  if (auto ready = matches_nform_guarded(f, kind)) return *ready;

  GuardedNormalizer nz;
  nz.opt = opt;
  nz.kind = kind;
  nz.guarded = true;
  nz.base_sig = sig_of(f);
  if (nz.base_sig.has(opt.head)) throw std::invalid_argument("head symbol already in signature");
  if (opt.reference) {
    if (!opt.reference->sig.contains(nz.base_sig))
      throw std::invalid_argument("reference structure signature too small");
    nz.ref_ext = *opt.reference;
  }

  auto work = fv.empty() && kind == AffixKind::Suffix ? shift_vars(f, 1) : f;
  auto [head_c, guard_c] = head_pair(f, opt.head, opt.logic);
  (void)guard_c;
  nz.nf.head = opt.head;
  nz.nf.head_arity = fv.empty() ? 1 : static_cast<int>(fv.size());
  nz.nf.sentence_head = fv.empty();
  nz.nf.head_conjunct = head_c;

  int h = nz.nf.head_arity;
  nz.push_guard(head_atom(opt.head, h));
  FB body = nz.process(work, true);
  nz.pop_guard();
  if (body.is_const()) {
    if (!body.c)
      nz.nf.universal.push_back(
          forall_prefix(h, mk_implies(head_atom(opt.head, h), mk_not(head_atom(opt.head, h)))));
  } else {
    nz.nf.universal.insert(nz.nf.universal.begin(),
                           forall_prefix(h, mk_implies(head_atom(opt.head, h), body.f)));
  }
  auto assembled = nz.nf.assemble();
  if (!matches_nform_guarded(assembled, kind))
    throw std::logic_error("guarded normal form shape check failed: " + print_formula(assembled));
  return nz.nf;
}

}  // namespace olt
