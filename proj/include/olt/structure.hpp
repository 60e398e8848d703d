#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "olt/formula.hpp"
#include "olt/fragments.hpp"

namespace olt {

// Tuples of domain element indices. The empty tuple is epsilon.
using Tuple = std::vector<int>;

struct Signature {
  // Name/arity pairs; the order is significant (it drives the matrix
  // encoding layout).
  std::vector<std::pair<std::string, int>> symbols;

  Signature() = default;
  Signature(std::initializer_list<std::pair<std::string, int>> syms);

  void add(const std::string& name, int arity);
  bool has(const std::string& name) const;
  int arity(const std::string& name) const;
  int index(const std::string& name) const;
  int max_arity() const;
  size_t size() const { return symbols.size(); }
  bool contains(const Signature& other) const;  // other's symbols, same arities

  static Signature unions(const Signature& a, const Signature& b);
  static Signature intersect(const Signature& a, const Signature& b);

  bool operator==(const Signature& o) const { return symbols == o.symbols; }
};

// Signature of a formula: symbols in first-occurrence order. Throws on
// inconsistent arities.
Signature sig_of(const FormulaPtr& f);

struct Structure {
  Signature sig;
  std::vector<std::string> dom;            // ordered element ids
  std::vector<std::set<Tuple>> rels;       // aligned with sig.symbols

  Structure() = default;
  explicit Structure(Signature s) : sig(std::move(s)), rels(sig.symbols.size()) {}

  int add_element(const std::string& id);  // returns index
  int elem(const std::string& id) const;   // throws if absent
  std::optional<int> find_elem(const std::string& id) const;
  void add_tuple(const std::string& rel, const std::vector<std::string>& ids);
  void add_tuple_idx(const std::string& rel, const Tuple& t);
  bool has_tuple(const std::string& rel, const Tuple& t) const;
  const std::set<Tuple>& tuples(const std::string& rel) const;
  size_t size() const { return dom.size(); }

  std::vector<std::string> names(const Tuple& t) const;
  Tuple tuple_of_names(const std::vector<std::string>& ids) const;

  bool operator==(const Structure& o) const;

  // Same shape with elements renamed to their ranks "1".."n".
  Structure canonical_renamed() const;
};

// A (sigma, n)-affix-type: one polarity per (symbol, window) pair, where the
// windows are the kind-affixes of x_1..x_n of length ar(R).
struct AffixType {
  int n = 0;
  AffixKind kind = AffixKind::Infix;
  // (symbol, 1-based window start, polarity), sorted.
  std::vector<std::tuple<std::string, int, bool>> atoms;

  bool operator==(const AffixType& o) const { return n == o.n && kind == o.kind && atoms == o.atoms; }
  std::string to_string() const;
};

// Window start positions for windows of length `len` inside x_1..x_n.
std::vector<int> affix_windows(int n, int len, AffixKind kind);

AffixType affix_type(const Structure& s, const Tuple& t, const Signature& sigma, AffixKind kind);

// First differing (symbol, window) between the two types, if any.
std::optional<std::string> affix_type_mismatch(const AffixType& a, const AffixType& b);

// |t| <= 1, or t lies in some sigma-relation.
bool is_live(const Structure& s, const Tuple& t, const Signature& sigma);

// All sigma-live tuples (epsilon, singletons, relation tuples).
std::vector<Tuple> live_tuples(const Structure& s, const Signature& sigma);

Structure induced_substructure(const Structure& s, const std::set<int>& subset);

// Matrix encoding: 0^n 1 menc(R_1) ... menc(R_m); the j-th bit of menc(R_i)
// is set iff the j-th tuple in big-endian lexicographic order (by domain
// order) is in the relation.
std::string encode_matrix(const Structure& s);
Structure decode_matrix(const std::string& bits, const Signature& sig);

// List encoding: "domain: a b c" then one "R/3: (1 2 3) (3 4 5)" line per
// relation symbol, in signature order.
std::string encode_list(const Structure& s);
Structure decode_list(const std::string& text, const Signature& sig);
Structure decode_list_infer(const std::string& text);  // signature from the lines

Structure load_structure_file(const std::string& path);
FormulaPtr load_formula_file(const std::string& path);

}  // namespace olt
