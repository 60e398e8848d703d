#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "olt/structure.hpp"

namespace olt {

// Explicit set of same-length tuple pairs between two structures, stored by
// element name so the relation can live in a file. (eps, eps) is the empty
// pair.
struct BisimRelation {
  std::set<std::pair<std::vector<std::string>, std::vector<std::string>>> pairs;

  void add(std::vector<std::string> a, std::vector<std::string> b);
  bool empty() const { return pairs.empty(); }
  size_t size() const { return pairs.size(); }

  std::string encode() const;                        // one "(a b) ~ (1 2)" line per pair
  static BisimRelation decode(const std::string&);   // "()" is eps
};

struct GameConfig {
  FragmentLabel logic = FragmentLabel::L_inf;  // any of the six ordered labels
  Signature sigma;
  int rounds = 0;
  int window = 0;  // M; defaults to max arity of sigma when 0

  int effective_window() const;
  void validate() const;  // window >= max arity
};

struct BisimReport {
  bool ok = true;
  std::vector<std::string> violations;
  int pairs_checked = 0;
  int moves_skipped = 0;  // forth/back instances whose response would exceed the relation depth

  std::string summary() const;
};

// Check atomic harmony and (g)forth/(g)back for every pair of Z, with the
// required responses looked up in Z itself. Moves whose response tuples are
// longer than the longest pair in Z are out of the relation's declared depth
// and are counted as skipped, so a relation "closed to depth k" passes.
BisimReport verify_bisimulation(const Structure& A, const Structure& B, const BisimRelation& Z,
                                const GameConfig& cfg);

// Greatest fixpoint over pairs of sigma-live tuples under the guarded
// clauses. Logic must be one of G_pre / G_suf / G_inf (the kind picks the
// affix windows). Empty result means no guarded bisimulation exists.
BisimRelation guarded_bisim_fixpoint(const Structure& A, const Structure& B,
                                     const Signature& sigma, AffixKind kind);

// Does the duplicator survive cfg.rounds rounds from (a_bar, b_bar)?
bool kround_game(const Structure& A, const Tuple& a_bar, const Structure& B, const Tuple& b_bar,
                 const GameConfig& cfg);

struct TransferReport {
  bool game_pass = false;
  int formulas_checked = 0;
  std::vector<std::string> disagreements;  // formulas distinguishing A and B
  bool ok() const { return !game_pass || disagreements.empty(); }
};

// Empirical forward transfer: if the k-round game passes, every pool
// sentence of the fragment with rank <= k must agree on A and B.
TransferReport check_equiv_transfer(const Structure& A, const Structure& B, const GameConfig& cfg,
                                    const std::vector<FormulaPtr>& pool);

}  // namespace olt
