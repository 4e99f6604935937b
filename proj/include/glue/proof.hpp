#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "glue/error.hpp"
#include "glue/formula.hpp"
#include "glue/normalize.hpp"
#include "json.hpp"

namespace glue {

enum class Rule { Axiom, ImpLeft, ImpRight, ForallLeft, ForallRight, TensorLeft, TensorRight };

inline std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::Axiom: return "axiom";
    case Rule::ImpLeft: return "-o L";
    case Rule::ImpRight: return "-o R";
    case Rule::ForallLeft: return "forall L";
    case Rule::ForallRight: return "forall R";
    case Rule::TensorLeft: return "* L";
    case Rule::TensorRight: return "* R";
  }
  return "?";
}

struct Sequent {
  std::vector<FormulaPtr> context;
  FormulaPtr goal;
};

// One inference of a cut-free sequent proof. Left rules name the context
// formula they decompose; forall rules record the instance chosen for the
// bound variable (a meaning term or a projection).
struct ProofNode {
  Rule rule = Rule::Axiom;
  std::vector<FormulaPtr> context;
  FormulaPtr goal;
  FormulaPtr principal;
  TermPtr term;
  std::optional<Projection> proj;
  std::vector<ProofNode> children;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }
};

inline std::string print_sequent(const std::vector<FormulaPtr>& context, const FormulaPtr& goal) {
  std::string out;
  for (std::size_t i = 0; i < context.size(); ++i) {
    if (i) out += ", ";
    out += print_formula(context[i]);
  }
  return out + (out.empty() ? "|- " : " |- ") + print_formula(goal);
}

inline std::string instance_text(const ProofNode& n) {
  if (n.rule != Rule::ForallLeft && n.rule != Rule::ForallRight) return {};
  const FormulaPtr& q = n.rule == Rule::ForallLeft ? n.principal : n.goal;
  return q->var + " := " + (n.proj ? n.proj->str() : print_term(n.term));
}

// Indented, one rule per line; conclusions above premises.
inline void proof_to_text(const ProofNode& n, std::string& out, int indent = 0) {
  out += std::string(static_cast<std::size_t>(indent) * 2, ' ');
  out += "[" + std::string(rule_name(n.rule)) + "] " + print_sequent(n.context, n.goal);
  std::string inst = instance_text(n);
  if (!inst.empty()) out += "   {" + inst + "}";
  out += "\n";
  for (const auto& c : n.children) proof_to_text(c, out, indent + 1);
}

inline std::string proof_to_text(const ProofNode& n) {
  std::string out;
  proof_to_text(n, out);
  return out;
}

inline nlohmann::ordered_json proof_to_json(const ProofNode& n) {
  nlohmann::ordered_json j;
  j["rule"] = std::string(rule_name(n.rule));
  j["sequent"] = print_sequent(n.context, n.goal);
  nlohmann::ordered_json subst = nlohmann::ordered_json::object();
  if (n.rule == Rule::ForallLeft || n.rule == Rule::ForallRight) {
    const FormulaPtr& q = n.rule == Rule::ForallLeft ? n.principal : n.goal;
    subst[q->var] = n.proj ? n.proj->str() : print_term(n.term);
  }
  j["substitution"] = subst;
  nlohmann::ordered_json kids = nlohmann::ordered_json::array();
  for (const auto& c : n.children) kids.push_back(proof_to_json(c));
  j["children"] = kids;
  return j;
}

namespace detail {

using Multiset = std::multiset<std::string>;

inline Multiset keys(const std::vector<FormulaPtr>& fs) {
  Multiset out;
  for (const auto& f : fs) out.insert(formula_key(f));
  return out;
}

inline bool take(Multiset& m, const FormulaPtr& f) {
  auto it = m.find(formula_key(f));
  if (it == m.end()) return false;
  m.erase(it);
  return true;
}

inline bool formula_mentions_eigen(const FormulaPtr& f, const ProofNode& n) {
  return any_atom(f, [&](const Formula& a) {
    if (n.proj) return a.proj.kind == Projection::Kind::Eigen && a.proj.id == n.proj->id;
    return contains_eigen(a.meaning, n.term->id);
  });
}

class ProofChecker {
 public:
  void check(const ProofNode& n) {
    std::size_t index = next_++;
    auto fail = [&](const std::string& reason) {
      throw Error(ErrorKind::InvalidStep, "step " + std::to_string(index) + " (" + std::string(rule_name(n.rule)) +
                                              "): " + reason);
    };
    auto expect_children = [&](std::size_t k) {
      if (n.children.size() != k) fail("expected " + std::to_string(k) + " premises");
    };
    if (!n.goal) fail("missing goal");
    Multiset ctx = keys(n.context);
    Multiset rest = ctx;
    if (n.principal && !take(rest, n.principal)) fail("linearity: principal formula is not in the context");

    switch (n.rule) {
      case Rule::Axiom:
        expect_children(0);
        if (n.context.size() != 1) fail("linearity: axiom must consume exactly one formula");
        if (n.goal->kind != FormulaKind::Atom || !formula_equal(n.context[0], n.goal))
          fail("axiom formulas differ: " + print_sequent(n.context, n.goal));
        break;
      case Rule::ImpLeft: {
        expect_children(2);
        if (!n.principal || n.principal->kind != FormulaKind::Limp) fail("principal is not an implication");
        const ProofNode& arg = n.children[0];
        const ProofNode& body = n.children[1];
        if (!formula_equal(arg.goal, n.principal->left)) fail("left premise does not prove the antecedent");
        if (!formula_equal(body.goal, n.goal)) fail("right premise changes the goal");
        Multiset parts = keys(arg.context);
        Multiset body_ctx = keys(body.context);
        if (!take(body_ctx, n.principal->right)) fail("consequent missing from right premise");
        parts.insert(body_ctx.begin(), body_ctx.end());
        if (parts != rest) fail("linearity: context split does not partition the context");
        break;
      }
      case Rule::ImpRight: {
        expect_children(1);
        if (n.goal->kind != FormulaKind::Limp) fail("goal is not an implication");
        const ProofNode& c = n.children[0];
        if (!formula_equal(c.goal, n.goal->right)) fail("premise does not prove the consequent");
        Multiset expected = ctx;
        expected.insert(formula_key(n.goal->left));
        if (keys(c.context) != expected) fail("linearity: hypothesis not added exactly once");
        break;
      }
      case Rule::ForallLeft: {
        expect_children(1);
        if (!n.principal || n.principal->kind != FormulaKind::Forall) fail("principal is not a forall");
        FormulaPtr body = instance(n, n.principal, fail);
        const ProofNode& c = n.children[0];
        if (!formula_equal(c.goal, n.goal)) fail("premise changes the goal");
        Multiset expected = rest;
        expected.insert(formula_key(body));
        if (keys(c.context) != expected) fail("linearity: premise context is not the instantiated context");
        break;
      }
      case Rule::ForallRight: {
        expect_children(1);
        if (n.goal->kind != FormulaKind::Forall) fail("goal is not a forall");
        bool eigen = n.proj ? n.proj->kind == Projection::Kind::Eigen : n.term && n.term->is_eigen();
        if (!eigen) fail("eigenvariable: instance is not a fresh local constant");
        for (const auto& f : n.context)
          if (formula_mentions_eigen(f, n)) fail("eigenvariable: occurs free in the context");
        if (formula_mentions_eigen(n.goal, n)) fail("eigenvariable: occurs free in the conclusion");
        FormulaPtr body = instance(n, n.goal, fail);
        const ProofNode& c = n.children[0];
        if (!formula_equal(c.goal, body)) fail("premise does not prove the instantiated body");
        if (keys(c.context) != ctx) fail("linearity: context changed");
        break;
      }
      case Rule::TensorLeft: {
        expect_children(1);
        if (!n.principal || n.principal->kind != FormulaKind::Tensor) fail("principal is not a tensor");
        const ProofNode& c = n.children[0];
        Multiset expected = rest;
        expected.insert(formula_key(n.principal->left));
        expected.insert(formula_key(n.principal->right));
        if (keys(c.context) != expected) fail("linearity: tensor components not both added");
        if (!formula_equal(c.goal, n.goal)) fail("premise changes the goal");
        break;
      }
      case Rule::TensorRight: {
        expect_children(2);
        if (n.goal->kind != FormulaKind::Tensor) fail("goal is not a tensor");
        if (!formula_equal(n.children[0].goal, n.goal->left) || !formula_equal(n.children[1].goal, n.goal->right))
          fail("premises do not prove the components");
        Multiset parts = keys(n.children[0].context);
        Multiset right = keys(n.children[1].context);
        parts.insert(right.begin(), right.end());
        if (parts != ctx) fail("linearity: context split does not partition the context");
        break;
      }
    }
    for (const auto& c : n.children) check(c);
  }

 private:
  template <typename Fail>
  static FormulaPtr instance(const ProofNode& n, const FormulaPtr& q, Fail&& fail) {
    if (q->binder == BinderKind::Projection) {
      if (!n.proj || (n.proj->kind != Projection::Kind::Ref && n.proj->kind != Projection::Kind::Eigen))
        fail("projection variable " + q->var + " needs a concrete projection");
      return open_forall(q, nullptr, *n.proj);
    }
    if (!n.term) fail("missing instance for " + q->var);
    if (!free_vars(n.term).empty() || has_metas(n.term)) fail("instance of " + q->var + " is not closed");
    Type ty;
    try {
      ty = typecheck(n.term);
    } catch (const Error& e) {
      fail(std::string("ill-typed instance: ") + e.what());
    }
    if (ty != q->type)
      fail("instance of " + q->var + " has type " + ty.str() + ", expected " + q->type.str());
    return open_forall(q, n.term, {});
  }

  std::size_t next_ = 0;
};

}  // namespace detail

// Re-verifies a proof step by step; throws InvalidStep naming the first bad
// step in preorder.
inline void check_proof(const ProofNode& proof, const Sequent& sequent) {
  if (detail::keys(proof.context) != detail::keys(sequent.context))
    throw Error(ErrorKind::InvalidStep, "step 0: linearity: proof context differs from the sequent");
  if (!formula_equal(proof.goal, sequent.goal))
    throw Error(ErrorKind::InvalidStep, "step 0: proof concludes a different goal");
  detail::ProofChecker().check(proof);
}

}  // namespace glue
