#include "olt/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace olt {

FormulaPtr mk_atom(std::string rel, std::vector<int> args) {
  if (args.empty()) throw std::invalid_argument("0-ary predicates are rejected: " + rel);
  for (int a : args)
    if (a < 1) throw std::invalid_argument("non-positive variable index in atom " + rel);
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Atom;
  f->rel = std::move(rel);
  f->args = std::move(args);
  return f;
}

static FormulaPtr mk_node(Kind k, std::vector<FormulaPtr> kids, int var = 0) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->kids = std::move(kids);
  f->var = var;
  return f;
}

FormulaPtr mk_not(FormulaPtr f) { return mk_node(Kind::Not, {std::move(f)}); }
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b) { return mk_node(Kind::And, {std::move(a), std::move(b)}); }
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b) { return mk_node(Kind::Or, {std::move(a), std::move(b)}); }
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b) { return mk_node(Kind::Implies, {std::move(a), std::move(b)}); }

FormulaPtr mk_exists(int var, FormulaPtr f) {
  if (var < 1) throw std::invalid_argument("non-positive quantified variable index");
  return mk_node(Kind::Exists, {std::move(f)}, var);
}
FormulaPtr mk_forall(int var, FormulaPtr f) {
  if (var < 1) throw std::invalid_argument("non-positive quantified variable index");
  return mk_node(Kind::Forall, {std::move(f)}, var);
}

FormulaPtr mk_conj(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) throw std::invalid_argument("mk_conj: empty list");
  FormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = mk_and(acc, fs[i]);
  return acc;
}

FormulaPtr mk_disj(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) throw std::invalid_argument("mk_disj: empty list");
  FormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = mk_or(acc, fs[i]);
  return acc;
}

namespace {

struct Lexer {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    if (pos >= s.size()) throw parse_error("unexpected end of input", pos);
    return s[pos];
  }
  void expect(char c) {
    if (peek() != c) throw parse_error(std::string("expected '") + c + "'", pos);
    ++pos;
  }
  std::string symbol() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' && s[pos] != ')')
      ++pos;
    if (pos == start) throw parse_error("expected a symbol", pos);
    return s.substr(start, pos - start);
  }
};

// Variable tokens are exactly x1, x2, ... (no leading zeros).
bool parse_var(const std::string& tok, int& out) {
  if (tok.size() < 2 || tok[0] != 'x') return false;
  if (tok[1] == '0') return false;
  long v = 0;
  for (size_t i = 1; i < tok.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
    v = v * 10 + (tok[i] - '0');
    if (v > 1000000) return false;
  }
  out = static_cast<int>(v);
  return true;
}

FormulaPtr parse_expr(Lexer& lx) {
  lx.expect('(');
  size_t head_pos = lx.pos;
  std::string head = lx.symbol();
  if (head == "not") {
    auto f = parse_expr(lx);
    lx.expect(')');
    return mk_not(f);
  }
  if (head == "and" || head == "or" || head == "implies" || head == "iff") {
    auto a = parse_expr(lx);
    auto b = parse_expr(lx);
    lx.expect(')');
    if (head == "and") return mk_and(a, b);
    if (head == "or") return mk_or(a, b);
    if (head == "implies") return mk_implies(a, b);
    return mk_and(mk_implies(a, b), mk_implies(b, a));
  }
  if (head == "forall" || head == "exists") {
    size_t vpos = lx.pos;
    std::string vtok = lx.symbol();
    int v;
    if (!parse_var(vtok, v))
      throw parse_error("expected a variable x1, x2, ... but got '" + vtok + "'", vpos);
    auto f = parse_expr(lx);
    lx.expect(')');
    return head == "forall" ? mk_forall(v, f) : mk_exists(v, f);
  }
  // Atom: head is the relation symbol, arguments are variables.
  int dummy;
  if (parse_var(head, dummy))
    throw parse_error("relation symbol may not be a variable token", head_pos);
  std::vector<int> args;
  while (lx.peek() != ')') {
    size_t vpos = lx.pos;
    std::string vtok = lx.symbol();
    int v;
    if (!parse_var(vtok, v))
      throw parse_error("expected a variable x1, x2, ... but got '" + vtok + "'", vpos);
    args.push_back(v);
  }
  lx.expect(')');
  if (args.empty()) throw parse_error("0-ary atom '" + head + "'", head_pos);
  return mk_atom(head, args);
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  Lexer lx{text};
  auto f = parse_expr(lx);
  if (!lx.eof()) throw parse_error("trailing input after formula", lx.pos);
  return f;
}

std::string print_formula(const FormulaPtr& f) {
  std::ostringstream os;
  struct P {
    std::ostringstream& os;
    void go(const FormulaPtr& f) {
      switch (f->kind) {
        case Kind::Atom:
          os << '(' << f->rel;
          for (int a : f->args) os << " x" << a;
          os << ')';
          return;
        case Kind::Not:
          os << "(not ";
          go(f->kids[0]);
          os << ')';
          return;
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
          os << '(' << (f->kind == Kind::And ? "and" : f->kind == Kind::Or ? "or" : "implies") << ' ';
          go(f->kids[0]);
          os << ' ';
          go(f->kids[1]);
          os << ')';
          return;
        case Kind::Exists:
        case Kind::Forall:
          os << '(' << (f->kind == Kind::Exists ? "exists" : "forall") << " x" << f->var << ' ';
          go(f->kids[0]);
          os << ')';
          return;
      }
    }
  } p{os};
  p.go(f);
  return os.str();
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Atom:
      return a->rel == b->rel && a->args == b->args;
    default:
      if (a->var != b->var || a->kids.size() != b->kids.size()) return false;
      for (size_t i = 0; i < a->kids.size(); ++i)
        if (!equal(a->kids[i], b->kids[i])) return false;
      return true;
  }
}

static void free_vars_rec(const FormulaPtr& f, std::set<int>& out) {
  switch (f->kind) {
    case Kind::Atom:
      out.insert(f->args.begin(), f->args.end());
      return;
    case Kind::Exists:
    case Kind::Forall: {
      std::set<int> inner;
      free_vars_rec(f->kids[0], inner);
      inner.erase(f->var);
      out.insert(inner.begin(), inner.end());
      return;
    }
    default:
      for (auto& k : f->kids) free_vars_rec(k, out);
      return;
  }
}

std::vector<int> free_variables(const FormulaPtr& f) {
  std::set<int> s;
  free_vars_rec(f, s);
  return std::vector<int>(s.begin(), s.end());
}

int quantifier_rank(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::Atom:
      return 0;
    case Kind::Exists:
    case Kind::Forall:
      return 1 + quantifier_rank(f->kids[0]);
    default: {
      int m = 0;
      for (auto& k : f->kids) m = std::max(m, quantifier_rank(k));
      return m;
    }
  }
}

int max_var_index(const FormulaPtr& f) {
  int m = 0;
  if (f->kind == Kind::Atom) {
    for (int a : f->args) m = std::max(m, a);
    return m;
  }
  m = f->var;
  for (auto& k : f->kids) m = std::max(m, max_var_index(k));
  return m;
}

}  // namespace olt
