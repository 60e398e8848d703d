#pragma once

#include <map>

#include "olt/formula.hpp"
#include "olt/structure.hpp"

namespace olt {

// Variable index -> element index. Assignments for the windowed evaluator
// must cover a contiguous index run.
using Assignment = std::map<int, int>;

// Reference Tarskian semantics; the oracle every other evaluator is
// checked against.
bool eval_naive(const Structure& s, const Assignment& env, const FormulaPtr& f);

inline bool eval_sentence(const Structure& s, const FormulaPtr& f) {
  return eval_naive(s, {}, f);
}

// Window-dropping evaluation. Accepts formulas in the strict suffix
// grammar (bindings are dropped from the left of the window once it holds
// N = max arity variables) or in the prefix grammar (only bindings for
// x_1..x_N are stored; requantifying x_k discards bindings at index >= k).
// Always agrees with eval_naive on accepted inputs.
bool eval_windowed(const Structure& s, const Assignment& env, const FormulaPtr& f);

// Maximum assignment-window size reached during the windowed run; never
// exceeds the maximum arity of sig(f).
int peak_window(const Structure& s, const Assignment& env, const FormulaPtr& f);

}  // namespace olt
