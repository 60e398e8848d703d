#pragma once

#include <set>
#include <string>

#include "olt/formula.hpp"

namespace olt {

// The seven fragments plus full FO. Ordered-logic membership follows the
// inductive sets L_affix(n); the guarded variants are the intersections
// with GF.
enum class FragmentLabel { FO, GF, L_pre, L_suf, L_inf, G_pre, G_suf, G_inf };

std::string to_string(FragmentLabel l);
FragmentLabel fragment_from_string(const std::string& s);

enum class AffixKind { Prefix, Suffix, Infix };

AffixKind affix_kind_of(FragmentLabel l);  // valid for the six ordered labels
bool is_guarded_label(FragmentLabel l);

// f in L_affix(n) (or the guarded variant, which additionally requires GF).
// For L_suf the strict no-requantification grammar is enforced; L_pre and
// L_inf memberships are monotone in n and admit requantification.
bool depth_membership(const FormulaPtr& f, int n, FragmentLabel frag);

// Syntactic membership in the guarded fragment.
bool is_guarded(const FormulaPtr& f);

// All labels that hold for f. FO is always present; L/G labels are only
// assigned to sentences.
std::set<FragmentLabel> classify(const FormulaPtr& f);

}  // namespace olt
