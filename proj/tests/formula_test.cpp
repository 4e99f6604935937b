#include <gtest/gtest.h>

#include "glue/formula_syntax.hpp"

namespace glue {
namespace {

Signature sig() {
  return parse_signature(R"(
    Bill : e  leave : e->t  man : e->t  unicorn : e->t
    every : (e->t)->(e->t)->t  a : (e->t)->(e->t)->t
    conv-with : e->e->t  seek : e->(s->(s->e->t)->t)->t
  )");
}

FormulaPtr parse(std::string_view text) { return parse_formula(text, sig()); }

ErrorKind error_of(std::string_view text) {
  try {
    check_wellformed(parse(text));
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << text;
  return ErrorKind::IoError;
}

TEST(FormulaTest, ParsesAndPrints) {
  FormulaPtr f = parse("forall X:e. g.sig ~> X -o f.sig ~> leave(X)");
  EXPECT_EQ(print_formula(f), "forall X:e. g.sig ~> X -o f.sig ~> leave(X)");
  check_wellformed(f);
  FormulaPtr a = parse("forall H:proj, R:e->t. (forall x:e. h.sig.VAR ~> x -o h.sig.RESTR ~> R(x)) -o H ~> a(z, R(z), R(z))");
  EXPECT_TRUE(formula_equal(parse(print_formula(a)), a));
}

TEST(FormulaTest, AlphaEquivalence) {
  EXPECT_TRUE(formula_equal(parse("forall X:e. g.sig ~> X -o f.sig ~> leave(X)"),
                            parse("forall Y:e. g.sig ~> Y -o f.sig ~> leave(Y)")));
  EXPECT_TRUE(formula_equal(
      parse("forall H:proj, S:e->t. (forall x:e. g.sig ~> x -o H ~> S(x)) -o H ~> every(z, man(z), S(z))"),
      parse("forall G:proj, T:e->t. (forall y:e. g.sig ~> y -o G ~> T(y)) -o G ~> every(u, man(u), T(u))")));
  EXPECT_FALSE(formula_equal(parse("forall X:e. g.sig ~> X -o f.sig ~> leave(X)"),
                             parse("forall X:e. h.sig ~> X -o f.sig ~> leave(X)")));
}

TEST(FormulaTest, Wellformedness) {
  EXPECT_EQ(error_of("g.sig ~> X"), ErrorKind::UnboundVariable);
  EXPECT_EQ(error_of("forall X:e. H ~> X"), ErrorKind::OpenVariable);
  // Atoms of any type are fine; the declared type must match the meaning.
  check_wellformed(parse("f.sig ~> leave"));
  try {
    check_wellformed(mk_atom(Projection::at("f"), parse_term("leave", sig()), Type::t()));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AtomTypeMismatch);
  }
}

TEST(FormulaTest, AtomTypeMismatchOnIllTypedMeaning) {
  try {
    parse("f.sig ~> leave(leave)");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AtomTypeMismatch);
  }
}

TEST(FormulaTest, CurryMovesTensorIntoAntecedents) {
  FormulaPtr f = parse("forall Z:e, X:e. h.sig.VAR ~> Z * i.sig ~> X -o h.sig.RESTR ~> conv-with(Z, X)");
  EXPECT_TRUE(formula_equal(
      curry(f), parse("forall Z:e, X:e. h.sig.VAR ~> Z -o i.sig ~> X -o h.sig.RESTR ~> conv-with(Z, X)")));
  try {
    curry(parse("g.sig ~> Bill * g.sig ~> Bill"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TensorInConclusion);
  }
}

TEST(FormulaTest, PolarityRoles) {
  FormulaPtr f = parse(
      "forall H:proj, S:e->t. (forall x:e. g.sig ~> x -o H ~> S(x)) -o H ~> every(z, man(z), S(z))");
  auto roles = polarity_roles(f);
  ASSERT_EQ(roles.size(), 3u);
  EXPECT_EQ(roles[0].role, VarRole::Existential);
  EXPECT_EQ(roles[1].role, VarRole::Existential);
  EXPECT_EQ(roles[2].var, "x");
  EXPECT_EQ(roles[2].role, VarRole::Universal);
  auto goal = polarity_roles(f, true);
  EXPECT_EQ(goal[0].role, VarRole::Universal);
  EXPECT_EQ(goal[2].role, VarRole::Existential);
}

TEST(FormulaTest, TemplatePaths) {
  FormulaPtr f = parse("forall X:e. (^ SUBJ).sig ~> X -o ^.sig ~> leave(X)");
  EXPECT_EQ(print_formula(f), "forall X:e. (^ SUBJ).sig ~> X -o ^.sig ~> leave(X)");
  FormulaPtr g = parse("forall X:e. (up OBJ OBL-WITH).sig ~> X -o up.sig.RESTR ~> leave(X)");
  EXPECT_EQ(print_formula(g), "forall X:e. (^ OBJ OBL-WITH).sig ~> X -o ^.sig.RESTR ~> leave(X)");
}

}  // namespace
}  // namespace glue
