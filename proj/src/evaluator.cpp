#include "olt/evaluator.hpp"

#include <algorithm>
#include <stdexcept>

namespace olt {

bool eval_naive(const Structure& s, const Assignment& env, const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::Atom: {
      if (!s.sig.has(f->rel)) throw std::invalid_argument("unknown relation symbol " + f->rel);
      if (s.sig.arity(f->rel) != static_cast<int>(f->args.size()))
        throw std::invalid_argument("arity mismatch for " + f->rel);
      Tuple t;
      for (int v : f->args) {
        auto it = env.find(v);
        if (it == env.end())
          throw std::invalid_argument("unbound free variable x" + std::to_string(v));
        t.push_back(it->second);
      }
      return s.has_tuple(f->rel, t);
    }
    case Kind::Not:
      return !eval_naive(s, env, f->kids[0]);
    case Kind::And:
      return eval_naive(s, env, f->kids[0]) && eval_naive(s, env, f->kids[1]);
    case Kind::Or:
      return eval_naive(s, env, f->kids[0]) || eval_naive(s, env, f->kids[1]);
    case Kind::Implies:
      return !eval_naive(s, env, f->kids[0]) || eval_naive(s, env, f->kids[1]);
    case Kind::Exists: {
      Assignment e2 = env;
      for (int a = 0; a < static_cast<int>(s.dom.size()); ++a) {
        e2[f->var] = a;
        if (eval_naive(s, e2, f->kids[0])) return true;
      }
      return false;
    }
    case Kind::Forall: {
      Assignment e2 = env;
      for (int a = 0; a < static_cast<int>(s.dom.size()); ++a) {
        e2[f->var] = a;
        if (!eval_naive(s, e2, f->kids[0])) return false;
      }
      return true;
    }
  }
  return false;
}

namespace {

struct Windowed {
  const Structure& s;
  int max_ar;         // N
  bool suffix_mode;   // else prefix mode
  int peak = 0;

  void note(const Assignment& env) { peak = std::max(peak, static_cast<int>(env.size())); }

  bool run(Assignment env, const FormulaPtr& f) {
    note(env);
    switch (f->kind) {
      case Kind::Atom: {
        Tuple t;
        for (int v : f->args) {
          auto it = env.find(v);
          if (it == env.end())
            throw std::logic_error("windowed evaluator dropped a needed binding x" +
                                   std::to_string(v));
          t.push_back(it->second);
        }
        return s.has_tuple(f->rel, t);
      }
      case Kind::Not:
        return !run(env, f->kids[0]);
      case Kind::And:
        return run(env, f->kids[0]) && run(env, f->kids[1]);
      case Kind::Or:
        return run(env, f->kids[0]) || run(env, f->kids[1]);
      case Kind::Implies:
        return !run(env, f->kids[0]) || run(env, f->kids[1]);
      case Kind::Exists:
      case Kind::Forall: {
        int k = f->var;
        if (suffix_mode) {
          // Drop from the left until there is room for x_k.
          while (static_cast<int>(env.size()) >= max_ar) env.erase(env.begin());
        } else {
          // Requantifying x_k kills every binding at index >= k; indices
          // beyond N are never stored (no prefix atom can reach them).
          env.erase(env.lower_bound(k), env.end());
        }
        bool store = !suffix_mode ? k <= max_ar : true;
        bool is_exists = f->kind == Kind::Exists;
        for (int a = 0; a < static_cast<int>(s.dom.size()); ++a) {
          Assignment e2 = env;
          if (store) e2[k] = a;
          note(e2);
          bool v = run(std::move(e2), f->kids[0]);
          if (is_exists && v) return true;
          if (!is_exists && !v) return false;
          if (!store) break;  // choice is irrelevant, one iteration decides
        }
        return !is_exists;
      }
    }
    return false;
  }
};

// Restrict env to the free variables, determine the level n (max index in
// the assignment window; 0 for sentences) and pick the evaluation mode.
struct Prepared {
  Assignment env;
  int level;
  bool suffix_mode;
};

Prepared prepare(const Structure& s, const Assignment& env, const FormulaPtr& f) {
  auto fv = free_variables(f);
  Assignment e;
  for (int v : fv) {
    auto it = env.find(v);
    if (it == env.end()) throw std::invalid_argument("unbound free variable x" + std::to_string(v));
    if (it->second < 0 || it->second >= static_cast<int>(s.dom.size()))
      throw std::invalid_argument("assignment maps to element outside the domain");
    e[v] = it->second;
  }
  for (size_t i = 1; i < fv.size(); ++i)
    if (fv[i] != fv[i - 1] + 1)
      throw std::invalid_argument("free variables do not form a contiguous window");
  int n = fv.empty() ? 0 : fv.back();
  if (depth_membership(f, n, FragmentLabel::L_suf)) return {std::move(e), n, true};
  if (depth_membership(f, n, FragmentLabel::L_pre)) return {std::move(e), n, false};
  throw std::invalid_argument("formula outside the supported fragments (L_suf / L_pre)");
}

}  // namespace

bool eval_windowed(const Structure& s, const Assignment& env, const FormulaPtr& f) {
  auto prep = prepare(s, env, f);
  Windowed w{s, sig_of(f).max_arity(), prep.suffix_mode};
  return w.run(prep.env, f);
}

int peak_window(const Structure& s, const Assignment& env, const FormulaPtr& f) {
  auto prep = prepare(s, env, f);
  Windowed w{s, sig_of(f).max_arity(), prep.suffix_mode};
  w.run(prep.env, f);
  return w.peak;
}

}  // namespace olt
