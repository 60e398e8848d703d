#pragma once

#include <functional>
#include <random>

#include "olt/formula.hpp"
#include "olt/structure.hpp"

namespace olt {

// Visit every structure over sig with the given domain size (elements named
// "1".."n"). The callback returns false to stop early; the function returns
// false iff it was stopped.
bool for_each_structure(const Signature& sig, int size,
                        const std::function<bool(const Structure&)>& fn);

// Sizes 1..max_size.
bool for_each_structure_upto(const Signature& sig, int max_size,
                             const std::function<bool(const Structure&)>& fn);

// Number of structures over sig with the given domain size.
double structure_count(const Signature& sig, int size);

// Random sentence of the given ordered fragment (L_pre / L_suf / L_inf)
// with quantifier rank <= max_rank. Deterministic for a fixed rng state.
FormulaPtr random_sentence(FragmentLabel frag, const Signature& sig, int max_rank,
                           std::mt19937& rng);

// Systematic pool of small sentences of the fragment: all shapes
// Q1 x1 [lit], Q1 x1 (lit # Q2 x2 [lit']) over the signature, literals being
// atoms or negated atoms on the kind-compatible windows. Rank <= 2.
std::vector<FormulaPtr> sentence_pool_rank2(FragmentLabel frag, const Signature& sig);

}  // namespace olt
