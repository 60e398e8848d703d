#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace olt {

// Equality-free relational FO over the fixed variable set x1, x2, ...
// Variables are stored as their positive indices. Iff is surface syntax
// only; the parser expands p <-> q to (p -> q) /\ (q -> p).

enum class Kind { Atom, Not, And, Or, Implies, Exists, Forall };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Kind kind;
  std::string rel;             // Atom
  std::vector<int> args;       // Atom: variable indices, all >= 1
  int var = 0;                 // Exists / Forall
  std::vector<FormulaPtr> kids;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_quantifier() const { return kind == Kind::Exists || kind == Kind::Forall; }
};

FormulaPtr mk_atom(std::string rel, std::vector<int> args);
FormulaPtr mk_not(FormulaPtr f);
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_exists(int var, FormulaPtr f);
FormulaPtr mk_forall(int var, FormulaPtr f);

// Left-nested conjunction/disjunction of a nonempty list.
FormulaPtr mk_conj(const std::vector<FormulaPtr>& fs);
FormulaPtr mk_disj(const std::vector<FormulaPtr>& fs);

struct parse_error : std::runtime_error {
  size_t pos;
  parse_error(const std::string& what, size_t pos)
      : std::runtime_error(what + " (at offset " + std::to_string(pos) + ")"), pos(pos) {}
};

// S-expression grammar: (R x1 x2), (not f), (and f g), (or f g),
// (implies f g), (iff f g), (forall xN f), (exists xN f).
FormulaPtr parse_formula(const std::string& text);

// Canonical printer: lowercase keywords, single spaces. parse(print(f)) == f.
std::string print_formula(const FormulaPtr& f);

bool equal(const FormulaPtr& a, const FormulaPtr& b);

// Free variable indices in increasing order.
std::vector<int> free_variables(const FormulaPtr& f);

int quantifier_rank(const FormulaPtr& f);

// Largest variable index occurring anywhere (0 for none; atoms always have one).
int max_var_index(const FormulaPtr& f);

}  // namespace olt
