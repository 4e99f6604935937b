#include <gtest/gtest.h>

#include <algorithm>

#include "glue/lexicon.hpp"

namespace glue {
namespace {

const std::string kCorpus = GLUE_CORPUS_DIR;

const Lexicon& english_lexicon() {
  static const Lexicon lex = load_lexicon(kCorpus + "/english.lex");
  return lex;
}

FormulaPtr parse(std::string_view text) { return parse_formula(text, english_lexicon().signature); }

FormulaPtr inst(const std::string& headword, const std::string& node, const std::string& fs) {
  return instantiate(english_lexicon().entry(headword), node, parse_fstructure(fs));
}

const char* kConversation =
    "f:[PRED 'seek', SUBJ g:[PRED 'Bill'], OBJ h:[SPEC 'a', PRED 'conversation', "
    "OBL-WITH i:[SPEC 'every', PRED 'unicorn']]]";

// Premises as displayed for the worked examples, in the textual glue syntax.
TEST(LexiconTest, ReproducesDisplayedPremises) {
  const char* left = "f:[PRED 'leave', SUBJ g:[PRED 'Bill']]";
  const char* every = "f:[PRED 'leave', SUBJ g:[SPEC 'every', PRED 'man']]";
  const char* unicorn = "f:[PRED 'seek', SUBJ g:[PRED 'Bill'], OBJ h:[SPEC 'a', PRED 'unicorn']]";
  const char* al = "f:[PRED 'seek', SUBJ g:[PRED 'Bill'], OBJ h:[PRED 'Al']]";
  struct Case {
    const char* headword;
    const char* node;
    const char* fs;
    const char* displayed;
  } cases[] = {
      {"Bill", "g", left, "g.sig ~> Bill"},
      {"left", "f", left, "forall X:e. g.sig ~> X -o f.sig ~> leave(X)"},
      {"every-man", "g", every,
       "forall H:proj, S:e->t. (forall x:e. g.sig ~> x -o H ~> S(x)) -o H ~> every(z, man(z), S(z))"},
      {"a-unicorn", "h", unicorn,
       "forall H:proj, S:e->t. (forall x:e. h.sig ~> x -o H ~> S(x)) -o H ~> a(z, unicorn(z), S(z))"},
      {"seek", "f", unicorn,
       "forall Z:e, Y:(s->e->t)->t. g.sig ~> Z * (forall s:proj, p:e->t. (forall X:e. h.sig ~> X -o s ~> "
       "p(X)) -o s ~> Y(^p)) -o f.sig ~> seek(Z, ^Y)"},
      {"Al", "h", al, "h.sig ~> Al"},
      {"every-unicorn", "i", kConversation,
       "forall G:proj, S:e->t. (forall x:e. i.sig ~> x -o G ~> S(x)) -o G ~> every(u, unicorn(u), S(u))"},
      {"a", "h", kConversation,
       "forall H:proj, R:e->t, T:e->t. ((forall x:e. h.sig.VAR ~> x -o h.sig.RESTR ~> R(x)) * (forall x:e. "
       "h.sig ~> x -o H ~> T(x))) -o H ~> a(z, R(z), T(z))"},
      {"conv-with", "h", kConversation,
       "forall Z:e, X:e. h.sig.VAR ~> Z * i.sig ~> X -o h.sig.RESTR ~> conv-with(Z, X)"},
  };
  for (const auto& c : cases) {
    FormulaPtr got = inst(c.headword, c.node, c.fs);
    EXPECT_TRUE(formula_equal(got, parse(c.displayed))) << c.headword << ": " << print_formula(got);
    // deterministic
    EXPECT_EQ(formula_key(got), formula_key(inst(c.headword, c.node, c.fs)));
  }
}

TEST(LexiconTest, InstantiationErrors) {
  try {
    inst("Bill", "f", "f:[PRED 'leave', SUBJ g:[PRED 'Bill']]");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PredMismatch);
  }
  try {
    inst("seek", "f", "f:[PRED 'seek', SUBJ g:[PRED 'Bill']]");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingAttribute);
  }
  try {
    english_lexicon().entry("unicorns");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownEntry);
  }
}

std::vector<std::string> premise_names(const std::string& scenario) {
  Scenario sc = load_scenario(kCorpus + "/" + scenario + "/scenario");
  std::vector<std::string> names;
  for (const auto& p : premises(sc, load_lexicon(sc.lexicon_path))) names.push_back(p.name);
  std::sort(names.begin(), names.end());
  return names;
}

TEST(LexiconTest, ScenarioPremises) {
  using V = std::vector<std::string>;
  EXPECT_EQ(premise_names("bill-left"), (V{"Bill", "left"}));
  EXPECT_EQ(premise_names("bill-left-json"), (V{"Bill", "left"}));
  EXPECT_EQ(premise_names("seeks-a-unicorn"), (V{"Bill", "a-unicorn", "seek"}));
  EXPECT_EQ(premise_names("conversation"), (V{"Bill", "a", "conv-with", "every-unicorn", "seek"}));
}

TEST(LexiconTest, TopLevelTensorSplits) {
  Lexicon lex = english_lexicon();
  Scenario sc = parse_scenario(
      "premise g.sig ~> Bill * h.sig ~> Al\n"
      "goal f.sig\n");
  auto ps = premises(sc, lex);
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0].name, "premise1.1");
  EXPECT_EQ(print_formula(ps[1].formula), "h.sig ~> Al");
}

TEST(LexiconTest, ScenarioErrors) {
  auto kind = [](std::string_view text) {
    try {
      parse_scenario(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IoError;
  };
  EXPECT_EQ(kind("fstructure f:[PRED 'leave']\nattach left f\n"), ErrorKind::SyntaxError);
  EXPECT_EQ(kind("fstructure f:[PRED 'leave']\nattach left q\ngoal f.sig\n"), ErrorKind::UnknownLabel);
  EXPECT_EQ(kind("bogus line\n"), ErrorKind::SyntaxError);
}

TEST(LexiconTest, LexiconErrorsCarryLine) {
  try {
    parse_lexicon("const leave : e -> t\nentry left\n  PRED = leave\n  glue f.sig ~> leave(Al)\n", "x.lex");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnboundVariable);
    EXPECT_NE(std::string(e.what()).find("x.lex:4"), std::string::npos);
  }
}

}  // namespace
}  // namespace glue
