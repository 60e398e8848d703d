#include "doctest.h"
#include "olt/formula.hpp"

using namespace olt;

TEST_CASE("parse single quantifier") {
  auto f = parse_formula("(forall x1 (A x1))");
  CHECK(f->kind == Kind::Forall);
  CHECK(f->var == 1);
  CHECK(f->kids[0]->kind == Kind::Atom);
  CHECK(f->kids[0]->rel == "A");
  CHECK(f->kids[0]->args == std::vector<int>{1});
}

TEST_CASE("parse the student/professor sentence") {
  auto f = parse_formula(
      "(forall x1 (implies (student x1) (not (forall x2 (implies (professor x2) "
      "(admires x1 x2))))))");
  CHECK(f->kind == Kind::Forall);
  auto body = f->kids[0];
  CHECK(body->kind == Kind::Implies);
  CHECK(body->kids[0]->rel == "student");
  auto neg = body->kids[1];
  CHECK(neg->kind == Kind::Not);
  CHECK(neg->kids[0]->kind == Kind::Forall);
  CHECK(neg->kids[0]->var == 2);
}

TEST_CASE("unbalanced input is a syntax error") {
  CHECK_THROWS_AS(parse_formula("(and"), parse_error);
  CHECK_THROWS_AS(parse_formula("(A x1) junk"), parse_error);
  CHECK_THROWS_AS(parse_formula("(forall y1 (A y1))"), parse_error);
  CHECK_THROWS_AS(parse_formula("(A x0)"), parse_error);
  CHECK_THROWS_AS(parse_formula("(P)"), parse_error);
}

TEST_CASE("iff expands at parse time") {
  auto f = parse_formula("(iff (A x1) (B x1))");
  CHECK(f->kind == Kind::And);
  CHECK(f->kids[0]->kind == Kind::Implies);
  CHECK(f->kids[1]->kind == Kind::Implies);
  CHECK(equal(f->kids[0]->kids[0], f->kids[1]->kids[1]));
}

TEST_CASE("print round-trips") {
  const char* texts[] = {
      "(forall x1 (A x1))",
      "(exists x2 (and (R x1 x2) (not (P x2))))",
      "(forall x1 (implies (student x1) (not (forall x2 (implies (professor x2) (admires x1 x2))))))",
      "(or (A x1) (implies (B x1) (A x1)))",
  };
  for (auto t : texts) {
    auto f = parse_formula(t);
    CHECK(print_formula(f) == t);
    CHECK(equal(parse_formula(print_formula(f)), f));
  }
}

TEST_CASE("free variables") {
  CHECK(free_variables(parse_formula("(R x1 x2)")) == std::vector<int>{1, 2});
  CHECK(free_variables(parse_formula("(exists x2 (R x1 x2))")) == std::vector<int>{1});
  CHECK(free_variables(parse_formula("(forall x1 (A x1))")).empty());
}

TEST_CASE("quantifier rank") {
  CHECK(quantifier_rank(parse_formula("(R x1 x2)")) == 0);
  CHECK(quantifier_rank(parse_formula("(forall x1 (exists x2 (forall x3 (R x1 x2 x3))))")) == 3);
  // Theorem 9's phi has rank 3: a depth-3 block and a depth-2 block.
  auto phi = parse_formula(
      "(and (forall x1 (forall x2 (forall x3 (implies (and (R x1 x2) (R x2 x3)) "
      "(and (P1 x1) (P2 x3)))))) (forall x1 (forall x2 (implies (and (P1 x1) (P2 x2)) "
      "(R x1 x2)))))");
  CHECK(quantifier_rank(phi) == 3);
}
