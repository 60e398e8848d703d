#pragma once

#include <optional>
#include <string>
#include <vector>

#include "olt/formula.hpp"
#include "olt/fragments.hpp"
#include "olt/structure.hpp"

namespace olt {

// Turn an L_inf sentence into an equivalent L_suf sentence: each quantifier
// body is put into DNF (existential) or CNF (universal), treating quantified
// subformulas as atoms, and the parts not mentioning the bound variable are
// pulled outside. Vacuous quantifiers are dropped (domains are nonempty).
// Worst case the output is exponentially larger; inputs here are desk-scale.
FormulaPtr to_suffix_form(const FormulaPtr& f);

// phi(x_bar) becomes H(x_bar) /\ forall x_bar (H -> phi); for sentences the
// head is a unary H with exists x1 H(x1) /\ forall x1 (H(x1) -> phi'), where
// phi' is phi with all variable indices shifted up by one when the logic is
// suffix-kind (the suffix grammar forbids requantifying x1). H must be fresh
// for both signatures.
std::pair<FormulaPtr, FormulaPtr> introduce_head(const FormulaPtr& phi, const FormulaPtr& psi,
                                                 const std::string& head, FragmentLabel logic);

struct NormalForm {
  std::string head;
  int head_arity = 1;
  bool sentence_head = false;  // head conjunct is (exists x1 (H x1))
  FormulaPtr head_conjunct;
  std::vector<FormulaPtr> existential;  // forall* exists shaped conjuncts
  std::vector<FormulaPtr> universal;    // forall* shaped conjuncts
  std::vector<FormulaPtr> residual;
  std::vector<std::string> fresh;  // symbols introduced by the rewriting

  FormulaPtr assemble() const;
};

struct NormalizeOptions {
  std::string head = "H";
  std::string fresh_prefix = "_nf";
  const Structure* reference = nullptr;  // needed when a sentence-level block arises
  FragmentLabel logic = FragmentLabel::L_pre;
};

// App. C.2 rewriting for L_pre: innermost quantified subformulas with
// quantifier-free bodies are replaced by fresh atoms, with the defining
// requirement conjuncts appended.
NormalForm to_normal_form_pre(const FormulaPtr& f, NormalizeOptions opt = {});

// App. C.2 rewriting for G_pre / G_suf / G_inf: innermost guarded blocks are
// replaced by fresh atoms; the reverse direction is relativised under the
// innermost enclosing guard covering the block's free variables.
NormalForm to_normal_form_guarded(const FormulaPtr& f, NormalizeOptions opt);

// Shape validation. Returns the parsed NormalForm when f syntactically
// matches (NForm-L_pre) resp. (NForm-G_affix) with quantifier-free bodies.
std::optional<NormalForm> matches_nform_pre(const FormulaPtr& f);
std::optional<NormalForm> matches_nform_guarded(const FormulaPtr& f, AffixKind kind);

// Partition of conjuncts by maximal quantifier prefix: forall*exists* with a
// genuine exists goes left, forall* goes right. Head atoms and other
// quantifier-free conjuncts are ignored.
std::pair<std::vector<FormulaPtr>, std::vector<FormulaPtr>> extract_requirements(
    const FormulaPtr& f);
std::pair<std::vector<FormulaPtr>, std::vector<FormulaPtr>> extract_requirements(
    const NormalForm& nf);

// Parsed requirement views used by the model constructions.
struct PreReq {
  int ell = 0;
  FormulaPtr premise;  // may be null
  bool exists_kind = false;
  FormulaPtr body;     // over x_1..x_{ell+1} (quantified var may be absent)
  FormulaPtr formula;  // the original conjunct
};
std::optional<PreReq> parse_pre_requirement(const FormulaPtr& f);

struct GuardedReq {
  int ell = 0;
  FormulaPtr all_guard;  // atom over x_1..x_ell, null when ell = 0
  FormulaPtr premise;    // optional extra quantifier-free premise
  int block_len = 0;     // existential block length (0 for universal reqs)
  FormulaPtr ex_guard;   // atom guarding the existential block
  FormulaPtr body;       // quantifier-free part after the guard (may be null)
  bool exists_kind = false;
  FormulaPtr formula;
};
std::optional<GuardedReq> parse_guarded_requirement(const FormulaPtr& f);

// Every variable index shifted by delta (sentences only; delta >= 0).
FormulaPtr shift_vars(const FormulaPtr& f, int delta);

}  // namespace olt
