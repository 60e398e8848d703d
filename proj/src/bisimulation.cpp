#include "olt/bisimulation.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "olt/evaluator.hpp"

namespace olt {

void BisimRelation::add(std::vector<std::string> a, std::vector<std::string> b) {
  if (a.size() != b.size()) throw std::invalid_argument("bisim pair lengths differ");
  pairs.emplace(std::move(a), std::move(b));
}

std::string BisimRelation::encode() const {
  std::ostringstream os;
  auto side = [&](const std::vector<std::string>& t) {
    os << '(';
    for (size_t i = 0; i < t.size(); ++i) os << (i ? " " : "") << t[i];
    os << ')';
  };
  for (auto& [a, b] : pairs) {
    side(a);
    os << " ~ ";
    side(b);
    os << '\n';
  }
  return os.str();
}

BisimRelation BisimRelation::decode(const std::string& text) {
  BisimRelation z;
  std::istringstream is(text);
  std::string line;
  auto parse_side = [](const std::string& s, size_t& p) {
    while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
    if (p >= s.size() || s[p] != '(') throw std::invalid_argument("bisim line: expected '('");
    size_t close = s.find(')', p);
    if (close == std::string::npos) throw std::invalid_argument("bisim line: missing ')'");
    std::istringstream ts(s.substr(p + 1, close - p - 1));
    std::vector<std::string> ids;
    std::string id;
    while (ts >> id) ids.push_back(id);
    p = close + 1;
    return ids;
  };
  while (std::getline(is, line)) {
    size_t p = 0;
    while (p < line.size() && std::isspace(static_cast<unsigned char>(line[p]))) ++p;
    if (p >= line.size() || line[p] == '#') continue;
    auto a = parse_side(line, p);
    while (p < line.size() && (std::isspace(static_cast<unsigned char>(line[p])) || line[p] == '~')) ++p;
    auto b = parse_side(line, p);
    z.add(std::move(a), std::move(b));
  }
  return z;
}

int GameConfig::effective_window() const { return window > 0 ? window : sigma.max_arity(); }

void GameConfig::validate() const {
  if (logic == FragmentLabel::FO || logic == FragmentLabel::GF)
    throw std::invalid_argument("game config needs an ordered fragment label");
  if (effective_window() < sigma.max_arity())
    throw std::invalid_argument("window must be >= max arity of sigma");
}

namespace {

// Kind-affixes of a length-n tuple as (i, j) with 1 <= i <= j <= n, plus the
// empty affix encoded as (1, 0).
std::vector<std::pair<int, int>> affixes_of(int n, AffixKind kind) {
  std::vector<std::pair<int, int>> out;
  out.emplace_back(1, 0);
  switch (kind) {
    case AffixKind::Prefix:
      for (int j = 1; j <= n; ++j) out.emplace_back(1, j);
      break;
    case AffixKind::Suffix:
      for (int i = 1; i <= n; ++i) out.emplace_back(i, n);
      break;
    case AffixKind::Infix:
      for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) out.emplace_back(i, j);
      break;
  }
  return out;
}

Tuple slice(const Tuple& t, int i, int j) {
  if (j < i) return {};
  return Tuple(t.begin() + (i - 1), t.begin() + j);
}

bool harmony(const Structure& A, const Tuple& a, const Structure& B, const Tuple& b,
             const Signature& sigma, AffixKind kind, std::string* why = nullptr) {
  auto ta = affix_type(A, a, sigma, kind);
  auto tb = affix_type(B, b, sigma, kind);
  auto m = affix_type_mismatch(ta, tb);
  if (m && why) *why = *m;
  return !m;
}

struct PairHash {
  size_t operator()(const std::pair<Tuple, Tuple>& p) const {
    size_t h = 1469598103934665603ULL;
    auto mix = [&](int v) {
      h ^= static_cast<size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    for (int v : p.first) mix(v);
    mix(-1);
    for (int v : p.second) mix(v);
    return h;
  }
};

struct GameCtx {
  const Structure& A;
  const Structure& B;
  Signature sigma;
  AffixKind kind;
  bool guarded;
  std::vector<Tuple> liveA, liveB;  // guarded move spaces
  std::vector<std::unordered_map<std::pair<Tuple, Tuple>, bool, PairHash>> memo;

  bool survives(const Tuple& a, const Tuple& b, int k) {
    std::string why;
    if (!harmony(A, a, B, b, sigma, kind, &why)) return false;
    if (k == 0) return true;
    auto key = std::make_pair(a, b);
    auto& m = memo[k];
    auto it = m.find(key);
    if (it != m.end()) return it->second;
    m[key] = true;  // assume survival while exploring (cycles can't occur: tuples grow)
    bool ok = guarded ? guarded_round(a, b, k) : plain_round(a, b, k);
    m[key] = ok;
    return ok;
  }

  bool plain_round(const Tuple& a, const Tuple& b, int k) {
    for (auto [i, j] : affixes_of(static_cast<int>(a.size()), kind)) {
      Tuple pa = slice(a, i, j), pb = slice(b, i, j);
      // forth
      for (int e = 0; e < static_cast<int>(A.dom.size()); ++e) {
        bool found = false;
        Tuple na = pa;
        na.push_back(e);
        Tuple nb = pb;
        nb.push_back(0);
        for (int f = 0; f < static_cast<int>(B.dom.size()) && !found; ++f) {
          nb.back() = f;
          found = survives(na, nb, k - 1);
        }
        if (!found) return false;
      }
      // back
      for (int f = 0; f < static_cast<int>(B.dom.size()); ++f) {
        bool found = false;
        Tuple nb = pb;
        nb.push_back(f);
        Tuple na = pa;
        na.push_back(0);
        for (int e = 0; e < static_cast<int>(A.dom.size()) && !found; ++e) {
          na.back() = e;
          found = survives(na, nb, k - 1);
        }
        if (!found) return false;
      }
    }
    return true;
  }

  static bool has_prefix(const Tuple& t, const Tuple& p) {
    if (p.size() > t.size()) return false;
    return std::equal(p.begin(), p.end(), t.begin());
  }

  bool guarded_round(const Tuple& a, const Tuple& b, int k) {
    for (auto [i, j] : affixes_of(static_cast<int>(a.size()), kind)) {
      Tuple pa = slice(a, i, j), pb = slice(b, i, j);
      // gforth: live e_bar extending pa as a prefix
      for (auto& e : liveA) {
        if (!has_prefix(e, pa)) continue;
        bool found = false;
        for (auto& f : liveB) {
          if (f.size() != e.size() || !has_prefix(f, pb)) continue;
          if (survives(e, f, k - 1)) {
            found = true;
            break;
          }
        }
        if (!found) return false;
      }
      // gback
      for (auto& f : liveB) {
        if (!has_prefix(f, pb)) continue;
        bool found = false;
        for (auto& e : liveA) {
          if (e.size() != f.size() || !has_prefix(e, pa)) continue;
          if (survives(e, f, k - 1)) {
            found = true;
            break;
          }
        }
        if (!found) return false;
      }
    }
    return true;
  }
};

}  // namespace

bool kround_game(const Structure& A, const Tuple& a_bar, const Structure& B, const Tuple& b_bar,
                 const GameConfig& cfg) {
  cfg.validate();
  if (a_bar.size() != b_bar.size()) throw std::invalid_argument("start tuples differ in length");
  GameCtx ctx{A, B, cfg.sigma, affix_kind_of(cfg.logic), is_guarded_label(cfg.logic)};
  if (ctx.guarded) {
    ctx.liveA = live_tuples(A, cfg.sigma);
    ctx.liveB = live_tuples(B, cfg.sigma);
  }
  ctx.memo.resize(cfg.rounds + 1);
  return ctx.survives(a_bar, b_bar, cfg.rounds);
}

BisimReport verify_bisimulation(const Structure& A, const Structure& B, const BisimRelation& Z,
                                const GameConfig& cfg) {
  cfg.validate();
  BisimReport rep;
  if (Z.empty()) {
    rep.ok = false;
    rep.violations.push_back("relation is empty (Definition requires a non-empty set)");
    return rep;
  }
  AffixKind kind = affix_kind_of(cfg.logic);
  bool guarded = is_guarded_label(cfg.logic);

  std::set<std::pair<Tuple, Tuple>> zidx;
  size_t depth = 0;
  for (auto& [a, b] : Z.pairs) {
    zidx.emplace(A.tuple_of_names(a), B.tuple_of_names(b));
    depth = std::max(depth, a.size());
  }
  auto in_z = [&](const Tuple& a, const Tuple& b) { return zidx.count({a, b}) != 0; };

  std::vector<Tuple> liveA, liveB;
  if (guarded) {
    liveA = live_tuples(A, cfg.sigma);
    liveB = live_tuples(B, cfg.sigma);
  }

  auto name = [](const Structure& s, const Tuple& t) {
    std::string out = "(";
    for (size_t i = 0; i < t.size(); ++i) out += (i ? " " : "") + s.dom[t[i]];
    return out + ")";
  };

  for (auto& [a, b] : zidx) {
    ++rep.pairs_checked;
    std::string why;
    if (!harmony(A, a, B, b, cfg.sigma, kind, &why)) {
      rep.ok = false;
      rep.violations.push_back("atomic harmony fails on " + name(A, a) + " ~ " + name(B, b) +
                               ": " + why);
      continue;
    }
    for (auto [i, j] : affixes_of(static_cast<int>(a.size()), kind)) {
      Tuple pa = slice(a, i, j), pb = slice(b, i, j);
      if (!guarded) {
        if (pa.size() + 1 > depth) {
          ++rep.moves_skipped;
          continue;
        }
        for (int e = 0; e < static_cast<int>(A.dom.size()); ++e) {
          Tuple na = pa;
          na.push_back(e);
          bool found = false;
          Tuple nb = pb;
          nb.push_back(0);
          for (int f = 0; f < static_cast<int>(B.dom.size()) && !found; ++f) {
            nb.back() = f;
            found = in_z(na, nb);
          }
          if (!found) {
            rep.ok = false;
            rep.violations.push_back("forth fails from " + name(A, a) + " ~ " + name(B, b) +
                                     " on affix " + name(A, pa) + " and element " + A.dom[e]);
          }
        }
        for (int f = 0; f < static_cast<int>(B.dom.size()); ++f) {
          Tuple nb = pb;
          nb.push_back(f);
          bool found = false;
          Tuple na = pa;
          na.push_back(0);
          for (int e = 0; e < static_cast<int>(A.dom.size()) && !found; ++e) {
            na.back() = e;
            found = in_z(na, nb);
          }
          if (!found) {
            rep.ok = false;
            rep.violations.push_back("back fails from " + name(A, a) + " ~ " + name(B, b) +
                                     " on affix " + name(B, pb) + " and element " + B.dom[f]);
          }
        }
      } else {
        for (auto& e : liveA) {
          if (!GameCtx::has_prefix(e, pa)) continue;
          if (e.size() > depth) {
            ++rep.moves_skipped;
            continue;
          }
          bool found = false;
          for (auto& f : liveB) {
            if (f.size() == e.size() && GameCtx::has_prefix(f, pb) && in_z(e, f)) {
              found = true;
              break;
            }
          }
          if (!found) {
            rep.ok = false;
            rep.violations.push_back("gforth fails from " + name(A, a) + " ~ " + name(B, b) +
                                     " on live tuple " + name(A, e));
          }
        }
        for (auto& f : liveB) {
          if (!GameCtx::has_prefix(f, pb)) continue;
          if (f.size() > depth) {
            ++rep.moves_skipped;
            continue;
          }
          bool found = false;
          for (auto& e : liveA) {
            if (e.size() == f.size() && GameCtx::has_prefix(e, pa) && in_z(e, f)) {
              found = true;
              break;
            }
          }
          if (!found) {
            rep.ok = false;
            rep.violations.push_back("gback fails from " + name(A, a) + " ~ " + name(B, b) +
                                     " on live tuple " + name(B, f));
          }
        }
      }
      if (rep.violations.size() > 50) return rep;  // enough diagnostics
    }
  }
  return rep;
}

std::string BisimReport::summary() const {
  std::ostringstream os;
  os << (ok ? "pass" : "FAIL") << " (" << pairs_checked << " pairs";
  if (moves_skipped) os << ", " << moves_skipped << " moves beyond depth skipped";
  os << ")";
  for (auto& v : violations) os << "\n  " << v;
  return os.str();
}

BisimRelation guarded_bisim_fixpoint(const Structure& A, const Structure& B,
                                     const Signature& sigma, AffixKind kind) {
  auto liveA = live_tuples(A, sigma);
  auto liveB = live_tuples(B, sigma);
  std::set<std::pair<Tuple, Tuple>> z;
  for (auto& a : liveA)
    for (auto& b : liveB)
      if (a.size() == b.size() && harmony(A, a, B, b, sigma, kind)) z.emplace(a, b);

  auto has_prefix = GameCtx::has_prefix;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = z.begin(); it != z.end();) {
      const auto& [a, b] = *it;
      bool alive = true;
      for (auto [i, j] : affixes_of(static_cast<int>(a.size()), kind)) {
        Tuple pa = slice(a, i, j), pb = slice(b, i, j);
        for (auto& e : liveA) {
          if (!has_prefix(e, pa)) continue;
          bool found = false;
          for (auto& f : liveB)
            if (f.size() == e.size() && has_prefix(f, pb) && z.count({e, f})) {
              found = true;
              break;
            }
          if (!found) {
            alive = false;
            break;
          }
        }
        if (!alive) break;
        for (auto& f : liveB) {
          if (!has_prefix(f, pb)) continue;
          bool found = false;
          for (auto& e : liveA)
            if (e.size() == f.size() && has_prefix(e, pa) && z.count({e, f})) {
              found = true;
              break;
            }
          if (!found) {
            alive = false;
            break;
          }
        }
        if (!alive) break;
      }
      if (!alive) {
        it = z.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }

  BisimRelation out;
  for (auto& [a, b] : z) out.add(A.names(a), B.names(b));
  return out;
}

TransferReport check_equiv_transfer(const Structure& A, const Structure& B, const GameConfig& cfg,
                                    const std::vector<FormulaPtr>& pool) {
  TransferReport rep;
  rep.game_pass = kround_game(A, {}, B, {}, cfg);
  for (auto& f : pool) {
    if (!free_variables(f).empty()) continue;
    if (!depth_membership(f, 0, cfg.logic)) continue;
    if (quantifier_rank(f) > cfg.rounds) continue;
    if (!cfg.sigma.contains(sig_of(f))) continue;
    ++rep.formulas_checked;
    bool va = eval_sentence(A, f);
    bool vb = eval_sentence(B, f);
    if (va != vb)
      rep.disagreements.push_back(print_formula(f) + " : A=" + (va ? "true" : "false") +
                                  " B=" + (vb ? "true" : "false"));
  }
  return rep;
}

}  // namespace olt
