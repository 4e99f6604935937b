#include <gtest/gtest.h>

#include <functional>

#include "glue/oracle.hpp"
#include "glue/prover.hpp"
#include "support.hpp"

namespace glue {
namespace {

using test::corpus_problem;
using test::formula;

const char* kTypeRaisedAl = "forall P:e->t. (forall x:e. h.sig ~> x -o s.sig ~> P(x)) -o s.sig ~> P(Al)";
const char* kTypeRaising =
    "forall I:proj, Z:e. I ~> Z -o (forall S:proj, P:e->t. (forall x:e. I ~> x -o S ~> P(x)) -o S ~> P(Z))";

std::string reason_of(const ProofNode& p, const Sequent& s) {
  try {
    check_proof(p, s);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidStep);
    return e.what();
  }
  return "ok";
}

ProofNode* find_node(ProofNode& n, Rule rule) {
  if (n.rule == rule) return &n;
  for (auto& c : n.children)
    if (ProofNode* hit = find_node(c, rule)) return hit;
  return nullptr;
}

TEST(TheoremTest, AlCanFunctionAsAQuantifier) {
  Sequent s{{formula("h.sig ~> Al")}, formula(kTypeRaisedAl)};
  ProofSet ps = prove(s);
  ASSERT_EQ(ps.proofs.size(), 1u);
  check_proof(ps.proofs[0], s);
  // forall R, -o R, forall L, -o L, two axioms
  EXPECT_EQ(ps.proofs[0].size(), 6u);
  EXPECT_EQ(ps.proofs[0].rule, Rule::ForallRight);
}

TEST(TheoremTest, GeneralTypeRaising) {
  FormulaPtr goal = formula(kTypeRaising);
  ProofNode p = prove_theorem(goal);
  check_proof(p, {{}, goal});
  std::vector<Rule> spine;
  for (const ProofNode* n = &p; !n->children.empty(); n = &n->children.back()) spine.push_back(n->rule);
  // forall R (I, Z), -o R, forall R (S, P), -o R, forall L (x := Z), -o L
  std::vector<Rule> want{Rule::ForallRight, Rule::ForallRight, Rule::ImpRight, Rule::ForallRight,
                         Rule::ForallRight, Rule::ImpRight,    Rule::ForallLeft, Rule::ImpLeft};
  EXPECT_EQ(spine, want);
}

TEST(TheoremTest, TrivialTheorems) {
  FormulaPtr id = formula("forall I:proj, Z:e. I ~> Z -o I ~> Z");
  check_proof(prove_theorem(id), {{}, id});
  try {
    prove_theorem(formula("forall I:proj, Z:e, W:e. I ~> Z -o I ~> W"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotProvable);
  }
}

TEST(TheoremTest, DepthLimitIsDistinctFromFailure) {
  Limits tight;
  tight.max_depth = 3;
  try {
    prove_theorem(formula(kTypeRaising), tight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DepthLimitReached);
  }
  auto p = corpus_problem("conversation");
  ReadingSet rs = derive_readings(p.premises, p.goal, tight);
  EXPECT_TRUE(rs.stats.limit_hit);
  EXPECT_TRUE(rs.readings.empty());
}

TEST(TheoremTest, TrivialSequents) {
  EXPECT_TRUE(prove({{}, formula("g.sig ~> Bill")}).proofs.empty());
  EXPECT_TRUE(prove({{formula("g.sig ~> Bill"), formula("g.sig ~> Bill")}, formula("g.sig ~> Bill")}).proofs.empty());
  EXPECT_EQ(prove({{formula("g.sig ~> Bill")}, formula("g.sig ~> Bill")}).proofs.size(), 1u);
}

TEST(TheoremTest, BillSeeksPrime) {
  auto p = corpus_problem("seeks-a-unicorn");
  std::vector<FormulaPtr> ctx{formula("g.sig ~> Bill")};
  for (const auto& f : p.premises)
    if (print_formula(f).find("seek(") != std::string::npos) ctx.push_back(f);
  ASSERT_EQ(ctx.size(), 2u);
  Sequent s{ctx, formula(R"(forall Z:e. h.sig ~> Z -o f.sig ~> seek(Bill, ^\R:s->e->t. (!R)(Z)))")};
  ProofSet ps = prove(s);
  ASSERT_FALSE(ps.proofs.empty());
  for (const auto& proof : ps.proofs) check_proof(proof, s);
}

TEST(TheoremTest, TensorInConsequentRejected) {
  try {
    prove({{formula("forall X:e. g.sig ~> X -o f.sig ~> leave(X) * h.sig ~> X")}, formula("f.sig ~> leave(Bill)")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TensorInConclusion);
  }
}

TEST(TheoremTest, TensorPremisesAndGoals) {
  Sequent s{{formula("g.sig ~> Bill * h.sig ~> Al")}, formula("h.sig ~> Al * g.sig ~> Bill")};
  ProofSet ps = prove(s);
  ASSERT_EQ(ps.proofs.size(), 1u);
  check_proof(ps.proofs[0], s);
  EXPECT_EQ(ps.proofs[0].rule, Rule::TensorLeft);
}

TEST(CheckProofTest, PremiseConsumedTwice) {
  auto p = corpus_problem("bill-left");
  ReadingSet rs = derive_readings(p.premises, p.goal);
  ASSERT_EQ(rs.readings.size(), 1u);
  ProofNode proof = rs.readings[0].proof;
  Sequent s{p.premises, reading_goal(p.goal, rs.readings[0].meaning)};
  EXPECT_EQ(reason_of(proof, s), "ok");

  // The sequent offers Bill twice but the proof uses it once.
  Sequent twice = s;
  twice.context.push_back(formula("g.sig ~> Bill"));
  EXPECT_NE(reason_of(proof, twice).find("linearity"), std::string::npos);

  // Both branches of the implication claim Bill.
  ProofNode* imp = find_node(proof, Rule::ImpLeft);
  ASSERT_NE(imp, nullptr);
  imp->children[1].context.push_back(formula("g.sig ~> Bill"));
  EXPECT_NE(reason_of(proof, s).find("linearity"), std::string::npos);
}

TEST(CheckProofTest, EigenvariableEscape) {
  // [forall Y. h ~> Y] |- forall x. h ~> x, instantiating Y with the
  // eigenvariable before the forall R that introduces it.
  FormulaPtr prem = formula("forall Y:e. h.sig ~> Y");
  FormulaPtr goal = formula("forall x:e. h.sig ~> x");
  Sequent s{{prem}, goal};
  ProofSet ps = prove(s);
  ASSERT_EQ(ps.proofs.size(), 1u);
  EXPECT_EQ(reason_of(ps.proofs[0], s), "ok");

  const ProofNode& right = ps.proofs[0];
  const ProofNode& left = right.children[0];
  ASSERT_EQ(right.rule, Rule::ForallRight);
  ASSERT_EQ(left.rule, Rule::ForallLeft);
  ProofNode swapped = left;
  swapped.goal = right.goal;
  ProofNode inner = right;
  inner.context = {left.children[0].context};
  inner.children = {left.children[0]};
  swapped.children = {inner};
  EXPECT_NE(reason_of(swapped, s).find("eigenvariable"), std::string::npos);
}

TEST(CheckProofTest, EigenvariableEscapeInTypeRaisedAl) {
  Sequent s{{formula("h.sig ~> Al")}, formula(kTypeRaisedAl)};
  ProofNode proof = prove(s).proofs.at(0);
  ASSERT_EQ(proof.rule, Rule::ForallRight);
  // Reuse the eigenvariable P as the instance of x: the instantiated
  // formula then mentions P and cannot match h.sig ~> Al.
  ProofNode* inst = find_node(proof, Rule::ForallLeft);
  ASSERT_NE(inst, nullptr);
  TermPtr p = proof.term;
  ProofNode bad = proof;
  find_node(bad, Rule::ForallLeft)->term = mk_app(p, inst->term);
  EXPECT_NE(reason_of(bad, s), "ok");
  // The eigenvariable already occurs in the context of its forall R.
  FormulaPtr leak = mk_atom(Projection::at("g"), p, p->type);
  ProofNode escape = proof;
  escape.context.push_back(leak);
  escape.children[0].context.push_back(leak);
  EXPECT_NE(reason_of(escape, {{formula("h.sig ~> Al"), leak}, s.goal}).find("eigenvariable"), std::string::npos);
}

TEST(CheckProofTest, IllTypedInstance) {
  auto p = corpus_problem("bill-left");
  ReadingSet rs = derive_readings(p.premises, p.goal);
  ProofNode proof = rs.readings[0].proof;
  Sequent s{p.premises, reading_goal(p.goal, rs.readings[0].meaning)};
  ProofNode* inst = find_node(proof, Rule::ForallLeft);
  ASSERT_NE(inst, nullptr);
  inst->term = test::term("leave");
  EXPECT_NE(reason_of(proof, s).find("type"), std::string::npos);
}

TEST(TypedScopeTest, EveryManLeft) {
  auto p = corpus_problem("every-man-left");
  ReadingSet typed = derive_readings(p.premises, p.goal);
  ASSERT_EQ(typed.readings.size(), 1u);
  // The scope projection H is only ever f.sig.
  std::function<void(const ProofNode&)> scopes = [&](const ProofNode& n) {
    if (n.rule == Rule::ForallLeft && n.proj) EXPECT_EQ(n.proj->str(), "f.sig");
    for (const auto& c : n.children) scopes(c);
  };
  scopes(typed.readings[0].proof);
  EXPECT_EQ(typed.stats.ill_typed_attempts, 0);

  Limits untyped;
  untyped.typed_scope = false;
  ReadingSet loose = derive_readings(p.premises, p.goal, untyped);
  ASSERT_EQ(loose.readings.size(), 1u);
  EXPECT_TRUE(alpha_equal(loose.readings[0].meaning, typed.readings[0].meaning));
  EXPECT_GE(loose.stats.ill_typed_attempts, 1);
  ReadingSet loose_oracle = oracle_enumerate(p.premises, p.goal, untyped);
  EXPECT_GE(loose_oracle.stats.ill_typed_attempts, 1);
}

}  // namespace
}  // namespace glue
