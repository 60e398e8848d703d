#include "doctest.h"
#include "olt/fragments.hpp"

using namespace olt;

namespace {
FormulaPtr P(const std::string& t) { return parse_formula(t); }

const char* kStudentProfessor =
    "(forall x1 (implies (student x1) (not (forall x2 (implies (professor x2) "
    "(admires x1 x2))))))";
const char* kLecturer =
    "(forall x1 (implies (lecturer x1) (not (exists x2 (and (professor x2) "
    "(forall x3 (implies (student x3) (introduce x1 x2 x3))))))))";
const char* kTransitive =
    "(forall x1 (forall x2 (forall x3 (implies (and (isPartOf x1 x2) (isPartOf x2 x3)) "
    "(isPartOf x1 x3)))))";
const char* kNarcissist =
    "(forall x1 (implies (narcissist x1) (and (person x1) (loves x1 x1))))";
const char* kInverse =
    "(forall x1 (forall x2 (iff (hasParent x1 x2) (hasParent x2 x1))))";
const char* kRequant =
    "(forall x1 (forall x2 (forall x3 (implies (R x1 x2 x3) (and (A x1) "
    "(exists x2 (exists x3 (S x1 x2 x3))))))))";
}  // namespace

TEST_CASE("requantification example is in L_inf at depth 0") {
  CHECK(depth_membership(P(kRequant), 0, FragmentLabel::L_inf));
  CHECK_FALSE(depth_membership(P(kRequant), 0, FragmentLabel::L_suf));
}

TEST_CASE("mismatched infix atom") {
  CHECK_FALSE(depth_membership(P("(T x1 x3)"), 3, FragmentLabel::L_inf));
  CHECK(depth_membership(P("(R x1 x2)"), 2, FragmentLabel::L_inf));
  CHECK(depth_membership(P("(R x1 x2)"), 2, FragmentLabel::L_pre));
  CHECK(depth_membership(P("(R x1 x2)"), 2, FragmentLabel::L_suf));
}

TEST_CASE("depth membership is monotone in n for L_pre and L_inf") {
  auto f = P("(exists x2 (R x1 x2))");
  CHECK(depth_membership(f, 1, FragmentLabel::L_inf));
  CHECK(depth_membership(f, 2, FragmentLabel::L_inf));
  CHECK(depth_membership(f, 5, FragmentLabel::L_inf));
  auto g = P("(exists x1 (A x1))");
  CHECK(depth_membership(g, 0, FragmentLabel::L_pre));
  CHECK(depth_membership(g, 3, FragmentLabel::L_pre));
  // L_suf is strict: the atom window must end at the current depth.
  CHECK(depth_membership(P("(A x1)"), 1, FragmentLabel::L_suf));
  CHECK_FALSE(depth_membership(P("(A x1)"), 2, FragmentLabel::L_suf));
}

TEST_CASE("guarded fragment membership") {
  CHECK(is_guarded(P("(forall x1 (forall x2 (implies (R x1 x2) (A x2))))")));
  CHECK_FALSE(is_guarded(P("(forall x1 (forall x2 (R x1 x2)))")));
  // guard professor(x2) misses the free x1 of the guarded subformula
  CHECK_FALSE(is_guarded(P(kStudentProfessor)));
  // exists variant with a conjunction guard
  CHECK(is_guarded(P("(exists x1 (exists x2 (and (R x1 x2) (A x1))))")));
  // single-free-variable clause
  CHECK(is_guarded(P("(forall x1 (A x1))")));
  CHECK(is_guarded(P("(exists x1 (and (A x1) (forall x2 (implies (R x1 x2) (B x2)))))")));
}

TEST_CASE("classify the section-1 sentences") {
  auto c = classify(P(kStudentProfessor));
  CHECK(c.count(FragmentLabel::L_suf));
  CHECK(c.count(FragmentLabel::L_inf));
  CHECK_FALSE(c.count(FragmentLabel::L_pre));
  CHECK_FALSE(c.count(FragmentLabel::GF));
  CHECK(c.count(FragmentLabel::FO));

  auto c2 = classify(P(kLecturer));
  CHECK(c2.count(FragmentLabel::L_suf));
  CHECK(c2.count(FragmentLabel::L_inf));
  CHECK_FALSE(c2.count(FragmentLabel::L_pre));
}

TEST_CASE("classify the section-1 coexamples") {
  auto c1 = classify(P(kTransitive));
  CHECK(c1 == std::set<FragmentLabel>{FragmentLabel::FO});
  auto c3 = classify(P(kInverse));
  CHECK(c3 == std::set<FragmentLabel>{FragmentLabel::FO});
  // The narcissist sentence is guard-shaped, so GF holds; no ordered label does.
  auto c2 = classify(P(kNarcissist));
  CHECK(c2.count(FragmentLabel::FO));
  CHECK(c2.count(FragmentLabel::GF));
  for (auto l : {FragmentLabel::L_pre, FragmentLabel::L_suf, FragmentLabel::L_inf,
                 FragmentLabel::G_pre, FragmentLabel::G_suf, FragmentLabel::G_inf})
    CHECK_FALSE(c2.count(l));
}

TEST_CASE("classify theorem-9 phi: L_inf without GF") {
  auto phi = P(
      "(and (forall x1 (forall x2 (forall x3 (implies (and (R x1 x2) (R x2 x3)) "
      "(and (P1 x1) (P2 x3)))))) (forall x1 (forall x2 (implies (and (P1 x1) (P2 x2)) "
      "(R x1 x2)))))");
  auto c = classify(phi);
  CHECK(c.count(FragmentLabel::L_inf));
  CHECK_FALSE(c.count(FragmentLabel::GF));
}

TEST_CASE("classify respects the known inclusions") {
  const char* sentences[] = {kStudentProfessor, kLecturer, kTransitive, kNarcissist, kRequant,
                             "(forall x1 (forall x2 (implies (R x1 x2) (A x2))))",
                             "(exists x1 (A x1))"};
  for (auto t : sentences) {
    auto c = classify(P(t));
    if (c.count(FragmentLabel::L_suf)) CHECK(c.count(FragmentLabel::L_inf));
    if (c.count(FragmentLabel::L_pre)) CHECK(c.count(FragmentLabel::L_inf));
    for (auto [g, l] : std::initializer_list<std::pair<FragmentLabel, FragmentLabel>>{
             {FragmentLabel::G_pre, FragmentLabel::L_pre},
             {FragmentLabel::G_suf, FragmentLabel::L_suf},
             {FragmentLabel::G_inf, FragmentLabel::L_inf}}) {
      if (c.count(g)) {
        CHECK(c.count(l));
        CHECK(c.count(FragmentLabel::GF));
      }
    }
  }
}

TEST_CASE("open formulas get no ordered label") {
  auto c = classify(P("(R x1 x2)"));
  CHECK(c.count(FragmentLabel::FO));
  CHECK(c.count(FragmentLabel::GF));
  CHECK_FALSE(c.count(FragmentLabel::L_inf));
}
