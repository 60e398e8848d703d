#include "olt/structure.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace olt {

Signature::Signature(std::initializer_list<std::pair<std::string, int>> syms) {
  for (auto& [n, a] : syms) add(n, a);
}

void Signature::add(const std::string& name, int arity) {
  if (arity < 1) throw std::invalid_argument("arity must be >= 1 for " + name);
  if (has(name)) throw std::invalid_argument("duplicate symbol " + name);
  symbols.emplace_back(name, arity);
}

bool Signature::has(const std::string& name) const {
  for (auto& [n, a] : symbols)
    if (n == name) return true;
  return false;
}

int Signature::arity(const std::string& name) const {
  for (auto& [n, a] : symbols)
    if (n == name) return a;
  throw std::invalid_argument("unknown symbol " + name);
}

int Signature::index(const std::string& name) const {
  for (size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].first == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown symbol " + name);
}

int Signature::max_arity() const {
  int m = 0;
  for (auto& [n, a] : symbols) m = std::max(m, a);
  return m;
}

bool Signature::contains(const Signature& other) const {
  for (auto& [n, a] : other.symbols)
    if (!has(n) || arity(n) != a) return false;
  return true;
}

Signature Signature::unions(const Signature& a, const Signature& b) {
  Signature u = a;
  for (auto& [n, ar] : b.symbols) {
    if (u.has(n)) {
      if (u.arity(n) != ar) throw std::invalid_argument("arity clash on " + n);
    } else {
      u.add(n, ar);
    }
  }
  return u;
}

Signature Signature::intersect(const Signature& a, const Signature& b) {
  Signature s;
  for (auto& [n, ar] : a.symbols)
    if (b.has(n) && b.arity(n) == ar) s.add(n, ar);
  return s;
}

static void sig_of_rec(const FormulaPtr& f, Signature& s) {
  if (f->kind == Kind::Atom) {
    int ar = static_cast<int>(f->args.size());
    if (s.has(f->rel)) {
      if (s.arity(f->rel) != ar)
        throw std::invalid_argument("symbol " + f->rel + " used with two arities");
    } else {
      s.add(f->rel, ar);
    }
    return;
  }
  for (auto& k : f->kids) sig_of_rec(k, s);
}

Signature sig_of(const FormulaPtr& f) {
  Signature s;
  sig_of_rec(f, s);
  return s;
}

int Structure::add_element(const std::string& id) {
  if (find_elem(id)) throw std::invalid_argument("duplicate element " + id);
  dom.push_back(id);
  return static_cast<int>(dom.size()) - 1;
}

std::optional<int> Structure::find_elem(const std::string& id) const {
  for (size_t i = 0; i < dom.size(); ++i)
    if (dom[i] == id) return static_cast<int>(i);
  return std::nullopt;
}

int Structure::elem(const std::string& id) const {
  auto i = find_elem(id);
  if (!i) throw std::invalid_argument("element not in domain: " + id);
  return *i;
}

void Structure::add_tuple(const std::string& rel, const std::vector<std::string>& ids) {
  Tuple t;
  for (auto& id : ids) t.push_back(elem(id));
  add_tuple_idx(rel, t);
}

void Structure::add_tuple_idx(const std::string& rel, const Tuple& t) {
  int i = sig.index(rel);
  if (static_cast<int>(t.size()) != sig.symbols[i].second)
    throw std::invalid_argument("arity mismatch for " + rel);
  for (int e : t)
    if (e < 0 || e >= static_cast<int>(dom.size()))
      throw std::invalid_argument("element index out of range in " + rel);
  rels[i].insert(t);
}

bool Structure::has_tuple(const std::string& rel, const Tuple& t) const {
  return rels[sig.index(rel)].count(t) != 0;
}

const std::set<Tuple>& Structure::tuples(const std::string& rel) const {
  return rels[sig.index(rel)];
}

std::vector<std::string> Structure::names(const Tuple& t) const {
  std::vector<std::string> out;
  for (int e : t) out.push_back(dom.at(e));
  return out;
}

Tuple Structure::tuple_of_names(const std::vector<std::string>& ids) const {
  Tuple t;
  for (auto& id : ids) t.push_back(elem(id));
  return t;
}

bool Structure::operator==(const Structure& o) const {
  return sig == o.sig && dom == o.dom && rels == o.rels;
}

Structure Structure::canonical_renamed() const {
  Structure r = *this;
  for (size_t i = 0; i < r.dom.size(); ++i) r.dom[i] = std::to_string(i + 1);
  return r;
}

std::vector<int> affix_windows(int n, int len, AffixKind kind) {
  std::vector<int> starts;
  if (len > n) return starts;
  switch (kind) {
    case AffixKind::Prefix: starts.push_back(1); break;
    case AffixKind::Suffix: starts.push_back(n - len + 1); break;
    case AffixKind::Infix:
      for (int l = 1; l + len - 1 <= n; ++l) starts.push_back(l);
      break;
  }
  return starts;
}

AffixType affix_type(const Structure& s, const Tuple& t, const Signature& sigma, AffixKind kind) {
  if (!s.sig.contains(sigma))
    throw std::invalid_argument("affix_type: sigma not contained in structure signature");
  for (int e : t)
    if (e < 0 || e >= static_cast<int>(s.dom.size()))
      throw std::invalid_argument("affix_type: element not in domain");
  AffixType ty;
  ty.n = static_cast<int>(t.size());
  ty.kind = kind;
  for (auto& [name, ar] : sigma.symbols) {
    for (int start : affix_windows(ty.n, ar, kind)) {
      Tuple w(t.begin() + (start - 1), t.begin() + (start - 1) + ar);
      ty.atoms.emplace_back(name, start, s.has_tuple(name, w));
    }
  }
  std::sort(ty.atoms.begin(), ty.atoms.end());
  return ty;
}

std::string AffixType::to_string() const {
  std::ostringstream os;
  for (auto& [name, start, pol] : atoms)
    os << (pol ? "+" : "-") << name << "@" << start << " ";
  return os.str();
}

std::optional<std::string> affix_type_mismatch(const AffixType& a, const AffixType& b) {
  if (a.n != b.n || a.kind != b.kind) return std::string("shape mismatch");
  for (size_t i = 0; i < a.atoms.size() && i < b.atoms.size(); ++i) {
    if (a.atoms[i] != b.atoms[i]) {
      auto& [name, start, pol] = a.atoms[i];
      (void)pol;
      return name + " window at x" + std::to_string(start);
    }
  }
  if (a.atoms.size() != b.atoms.size()) return std::string("atom count mismatch");
  return std::nullopt;
}

bool is_live(const Structure& s, const Tuple& t, const Signature& sigma) {
  for (int e : t)
    if (e < 0 || e >= static_cast<int>(s.dom.size()))
      throw std::invalid_argument("is_live: element not in domain");
  if (t.size() <= 1) return true;
  for (auto& [name, ar] : sigma.symbols)
    if (ar == static_cast<int>(t.size()) && s.has_tuple(name, t)) return true;
  return false;
}

std::vector<Tuple> live_tuples(const Structure& s, const Signature& sigma) {
  std::set<Tuple> out;
  out.insert(Tuple{});
  for (int i = 0; i < static_cast<int>(s.dom.size()); ++i) out.insert(Tuple{i});
  for (auto& [name, ar] : sigma.symbols)
    for (auto& t : s.tuples(name)) out.insert(t);
  return std::vector<Tuple>(out.begin(), out.end());
}

Structure induced_substructure(const Structure& s, const std::set<int>& subset) {
  Structure r(s.sig);
  std::map<int, int> remap;
  for (int e : subset) {
    if (e < 0 || e >= static_cast<int>(s.dom.size()))
      throw std::invalid_argument("induced_substructure: element not in domain");
    remap[e] = r.add_element(s.dom[e]);
  }
  for (size_t i = 0; i < s.rels.size(); ++i) {
    for (auto& t : s.rels[i]) {
      bool inside = std::all_of(t.begin(), t.end(), [&](int e) { return remap.count(e) != 0; });
      if (!inside) continue;
      Tuple m;
      for (int e : t) m.push_back(remap[e]);
      r.rels[i].insert(m);
    }
  }
  return r;
}

namespace {

// Big-endian rank of a tuple: leftmost position most significant.
long long tuple_rank(const Tuple& t, int n) {
  long long r = 0;
  for (int e : t) r = r * n + e;
  return r;
}

Tuple tuple_of_rank(long long r, int ar, int n) {
  Tuple t(ar, 0);
  for (int i = ar - 1; i >= 0; --i) {
    t[i] = static_cast<int>(r % n);
    r /= n;
  }
  return t;
}

long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

std::string encode_matrix(const Structure& s) {
  int n = static_cast<int>(s.dom.size());
  std::string out(n, '0');
  out += '1';
  for (size_t i = 0; i < s.sig.symbols.size(); ++i) {
    int ar = s.sig.symbols[i].second;
    long long len = ipow(n, ar);
    std::string bits(len, '0');
    for (auto& t : s.rels[i]) bits[tuple_rank(t, n)] = '1';
    out += bits;
  }
  return out;
}

Structure decode_matrix(const std::string& bits, const Signature& sig) {
  size_t p = 0;
  while (p < bits.size() && bits[p] == '0') ++p;
  if (p >= bits.size() || bits[p] != '1')
    throw std::invalid_argument("decode_matrix: missing separator 1");
  int n = static_cast<int>(p);
  ++p;
  Structure s(sig);
  for (int i = 0; i < n; ++i) s.add_element(std::to_string(i + 1));
  for (size_t i = 0; i < sig.symbols.size(); ++i) {
    int ar = sig.symbols[i].second;
    long long len = ipow(n, ar);
    if (p + len > bits.size()) throw std::invalid_argument("decode_matrix: malformed length");
    for (long long j = 0; j < len; ++j) {
      char c = bits[p + j];
      if (c != '0' && c != '1') throw std::invalid_argument("decode_matrix: non-bit character");
      if (c == '1') s.rels[i].insert(tuple_of_rank(j, ar, n));
    }
    p += len;
  }
  if (p != bits.size()) throw std::invalid_argument("decode_matrix: malformed length");
  return s;
}

std::string encode_list(const Structure& s) {
  std::ostringstream os;
  os << "domain:";
  for (auto& d : s.dom) os << ' ' << d;
  os << '\n';
  for (size_t i = 0; i < s.sig.symbols.size(); ++i) {
    os << s.sig.symbols[i].first << '/' << s.sig.symbols[i].second << ':';
    for (auto& t : s.rels[i]) {
      os << " (";
      for (size_t j = 0; j < t.size(); ++j) os << (j ? " " : "") << s.dom[t[j]];
      os << ')';
    }
    os << '\n';
  }
  return os.str();
}

namespace {

struct ListLine {
  std::string rel;
  int arity;
  std::vector<std::vector<std::string>> tuples;
};

void parse_list_text(const std::string& text, std::vector<std::string>& domain,
                     std::vector<ListLine>& lines) {
  std::istringstream is(text);
  std::string line;
  bool saw_domain = false;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head[0] == '#') continue;
    if (head == "domain:") {
      saw_domain = true;
      std::string id;
      while (ls >> id) domain.push_back(id);
      continue;
    }
    auto slash = head.find('/');
    auto colon = head.find(':');
    if (slash == std::string::npos || colon == std::string::npos || colon != head.size() - 1)
      throw std::invalid_argument("list encoding: bad relation header '" + head + "'");
    ListLine ll;
    ll.rel = head.substr(0, slash);
    ll.arity = std::stoi(head.substr(slash + 1, colon - slash - 1));
    std::string rest;
    std::getline(ls, rest);
    size_t q = 0;
    while (q < rest.size()) {
      while (q < rest.size() && std::isspace(static_cast<unsigned char>(rest[q]))) ++q;
      if (q >= rest.size()) break;
      if (rest[q] != '(') throw std::invalid_argument("list encoding: expected '(' in tuples");
      size_t close = rest.find(')', q);
      if (close == std::string::npos) throw std::invalid_argument("list encoding: missing ')'");
      std::istringstream ts(rest.substr(q + 1, close - q - 1));
      std::vector<std::string> ids;
      std::string id;
      while (ts >> id) ids.push_back(id);
      if (static_cast<int>(ids.size()) != ll.arity)
        throw std::invalid_argument("arity mismatch in tuple for " + ll.rel);
      ll.tuples.push_back(ids);
      q = close + 1;
    }
    lines.push_back(std::move(ll));
  }
  if (!saw_domain) throw std::invalid_argument("list encoding: missing domain line");
}

}  // namespace

Structure decode_list(const std::string& text, const Signature& sig) {
  std::vector<std::string> domain;
  std::vector<ListLine> lines;
  parse_list_text(text, domain, lines);
  Structure s(sig);
  for (auto& d : domain) s.add_element(d);
  for (auto& ll : lines) {
    if (!sig.has(ll.rel)) throw std::invalid_argument("unknown symbol " + ll.rel);
    if (sig.arity(ll.rel) != ll.arity) throw std::invalid_argument("arity mismatch for " + ll.rel);
    for (auto& ids : ll.tuples) s.add_tuple(ll.rel, ids);
  }
  return s;
}

Structure decode_list_infer(const std::string& text) {
  std::vector<std::string> domain;
  std::vector<ListLine> lines;
  parse_list_text(text, domain, lines);
  Signature sig;
  for (auto& ll : lines) sig.add(ll.rel, ll.arity);
  Structure s(sig);
  for (auto& d : domain) s.add_element(d);
  for (auto& ll : lines)
    for (auto& ids : ll.tuples) s.add_tuple(ll.rel, ids);
  return s;
}

static std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Structure load_structure_file(const std::string& path) { return decode_list_infer(slurp(path)); }

FormulaPtr load_formula_file(const std::string& path) { return parse_formula(slurp(path)); }

}  // namespace olt
