#include "olt/enumerate.hpp"

#include <cmath>

#include "olt/fragments.hpp"

namespace olt {

namespace {

// Odometer over all tuples of all relations.
struct Slot {
  int rel;
  Tuple tuple;
};

}  // namespace

bool for_each_structure(const Signature& sig, int size,
                        const std::function<bool(const Structure&)>& fn) {
  Structure base(sig);
  for (int i = 0; i < size; ++i) base.add_element(std::to_string(i + 1));
  if (size == 0) return fn(base);
  std::vector<Slot> slots;
  for (size_t r = 0; r < sig.symbols.size(); ++r) {
    int ar = sig.symbols[r].second;
    Tuple t(ar, 0);
    while (true) {
      slots.push_back({static_cast<int>(r), t});
      int i = ar - 1;
      while (i >= 0 && t[i] == size - 1) t[i--] = 0;
      if (i < 0) break;
      ++t[i];
    }
  }
  std::vector<bool> bits(slots.size(), false);
  while (true) {
    Structure s = base;
    for (size_t i = 0; i < slots.size(); ++i)
      if (bits[i]) s.rels[slots[i].rel].insert(slots[i].tuple);
    if (!fn(s)) return false;
    size_t i = 0;
    while (i < bits.size() && bits[i]) bits[i++] = false;
    if (i == bits.size()) break;
    bits[i] = true;
  }
  return true;
}

bool for_each_structure_upto(const Signature& sig, int max_size,
                             const std::function<bool(const Structure&)>& fn) {
  for (int n = 1; n <= max_size; ++n)
    if (!for_each_structure(sig, n, fn)) return false;
  return true;
}

double structure_count(const Signature& sig, int size) {
  double bits = 0;
  for (auto& [name, ar] : sig.symbols) bits += std::pow(size, ar);
  return std::pow(2.0, bits);
}

namespace {

struct Gen {
  AffixKind kind;
  const Signature& sig;
  std::mt19937& rng;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  // Atoms available at level n for the kind.
  std::vector<FormulaPtr> atoms_at(int n) {
    std::vector<FormulaPtr> out;
    for (auto& [name, ar] : sig.symbols) {
      for (int start : affix_windows(n, ar, kind)) {
        std::vector<int> args;
        for (int i = 0; i < ar; ++i) args.push_back(start + i);
        out.push_back(mk_atom(name, args));
      }
    }
    return out;
  }

  FormulaPtr quantified(int n, int budget) {
    // L_suf binds x_{n+1}; L_pre / L_inf may requantify a smaller index.
    int k = n + 1;
    if (kind != AffixKind::Suffix && n >= 1 && pick(3) == 0) k = 1 + pick(n + 1);
    auto body = gen(k, budget - 1);
    return pick(2) ? mk_exists(k, body) : mk_forall(k, body);
  }

  FormulaPtr gen(int n, int budget) {
    auto atoms = atoms_at(n);
    if (atoms.empty()) {
      if (budget == 0) throw std::logic_error("generator stuck");
      return quantified(n, budget);
    }
    auto lit = [&] {
      auto a = atoms[pick(static_cast<int>(atoms.size()))];
      return pick(4) == 0 ? mk_not(a) : a;
    };
    if (budget == 0) {
      int c = pick(6);
      if (c < 4) return lit();
      auto a = gen(n, 0), b = gen(n, 0);
      return c == 4 ? mk_and(a, b) : mk_or(a, b);
    }
    int c = pick(10);
    if (c < 3) return lit();
    if (c < 7) return quantified(n, budget);
    if (c < 9) {
      auto a = gen(n, budget), b = gen(n, budget - 1);
      return c == 7 ? mk_and(a, b) : mk_implies(a, b);
    }
    return mk_not(gen(n, budget));
  }
};

}  // namespace

FormulaPtr random_sentence(FragmentLabel frag, const Signature& sig, int max_rank,
                           std::mt19937& rng) {
  AffixKind kind = affix_kind_of(frag);
  Gen g{kind, sig, rng};
  for (int tries = 0; tries < 10000; ++tries) {
    try {
      // Start with a quantifier so atoms become available.
      int budget = 1 + g.pick(max_rank);
      auto body = g.gen(1, budget - 1);
      auto f = g.pick(2) ? mk_exists(1, body) : mk_forall(1, body);
      if (free_variables(f).empty() && depth_membership(f, 0, frag) &&
          quantifier_rank(f) <= max_rank)
        return f;
    } catch (const std::logic_error&) {
      // dead end; retry
    }
  }
  throw std::logic_error("random_sentence failed to generate");
}

std::vector<FormulaPtr> sentence_pool_rank2(FragmentLabel frag, const Signature& sig) {
  AffixKind kind = affix_kind_of(frag);
  std::vector<FormulaPtr> pool;
  auto atoms_at = [&](int n) {
    std::vector<FormulaPtr> out;
    for (auto& [name, ar] : sig.symbols)
      for (int start : affix_windows(n, ar, kind)) {
        std::vector<int> args;
        for (int i = 0; i < ar; ++i) args.push_back(start + i);
        out.push_back(mk_atom(name, args));
      }
    return out;
  };
  auto lits_at = [&](int n) {
    std::vector<FormulaPtr> out;
    for (auto& a : atoms_at(n)) {
      out.push_back(a);
      out.push_back(mk_not(a));
    }
    return out;
  };
  auto quantify = [&](int v, const FormulaPtr& body, std::vector<FormulaPtr>& out) {
    out.push_back(mk_exists(v, body));
    out.push_back(mk_forall(v, body));
  };
  // Rank 1: Q x1 lit.
  for (auto& l : lits_at(1)) quantify(1, l, pool);
  // Rank 2: Q x1 (lit1 # Q x2 lit2) and Q x1 Q x2 (lit # lit).
  auto l1 = lits_at(1);
  auto l2 = lits_at(2);
  for (auto& a : l1)
    for (auto& b : l2) {
      std::vector<FormulaPtr> inner;
      quantify(2, b, inner);
      for (auto& qb : inner) {
        quantify(1, mk_and(a, qb), pool);
        quantify(1, mk_or(a, qb), pool);
      }
    }
  for (auto& a : l2)
    for (auto& b : l2) {
      std::vector<FormulaPtr> inner;
      inner.push_back(mk_and(a, b));
      inner.push_back(mk_or(a, b));
      for (auto& body : inner) {
        std::vector<FormulaPtr> q2;
        quantify(2, body, q2);
        for (auto& f : q2) quantify(1, f, pool);
      }
    }
  // Keep only genuine fragment sentences (everything should pass).
  std::vector<FormulaPtr> out;
  for (auto& f : pool)
    if (free_variables(f).empty() && depth_membership(f, 0, frag)) out.push_back(f);
  return out;
}

}  // namespace olt
