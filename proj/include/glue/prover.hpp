#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "glue/error.hpp"
#include "glue/formula.hpp"
#include "glue/proof.hpp"
#include "glue/unify.hpp"

namespace glue {

struct Limits {
  int max_depth = 64;       // rule applications along one branch
  bool typed_scope = true;  // atoms only match atoms of the same result type
};

struct Stats {
  long nodes = 0;               // rule applications tried
  long proofs = 0;              // complete proofs before deduplication
  long floundered = 0;          // branches left with unsolvable delayed constraints
  long ill_typed_attempts = 0;  // meta bindings rejected by type
  bool limit_hit = false;       // some branch was cut by max_depth

  void merge(const Stats& o) {
    nodes += o.nodes;
    proofs += o.proofs;
    floundered += o.floundered;
    ill_typed_attempts += o.ill_typed_attempts;
    limit_hit = limit_hit || o.limit_hit;
  }
};

struct Reading {
  TermPtr meaning;
  ProofNode proof;
};

struct ReadingSet {
  std::vector<Reading> readings;  // sorted by canonical key, pairwise non-alpha-equal
  Stats stats;
};

struct ProofSet {
  std::vector<ProofNode> proofs;
  Stats stats;
};

namespace detail {

struct Step;
using StepPtr = std::shared_ptr<const Step>;

// Proof skeleton recorded during search. Formulas are stored by resource id
// and resolved against the final substitution when the proof is built.
struct Step {
  Rule rule = Rule::Axiom;
  FormulaPtr goal;
  int principal = -1;
  std::vector<int> introduced;
  TermPtr term;
  std::optional<Projection> proj;
  std::vector<StepPtr> children;
};

struct Branch {
  Unifier u;
  std::vector<FormulaPtr> resources;
  std::vector<char> available;

  int add(const FormulaPtr& f, bool avail) {
    resources.push_back(f);
    available.push_back(avail ? 1 : 0);
    return static_cast<int>(resources.size()) - 1;
  }
};

using Results = std::vector<std::pair<Branch, StepPtr>>;

inline StepPtr make_step(Step s) { return std::make_shared<const Step>(std::move(s)); }

// Which premises can be used as resources: tensors only at the top of a
// context formula, never as the consequent reached while focusing.
inline bool focusable(const FormulaPtr& f, bool top);
inline bool provable_shape(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Atom: return true;
    case FormulaKind::Tensor: return provable_shape(f->left) && provable_shape(f->right);
    case FormulaKind::Forall: return provable_shape(f->left);
    case FormulaKind::Limp: return focusable(f->left, true) && provable_shape(f->right);
  }
  return false;
}
inline bool focusable(const FormulaPtr& f, bool top) {
  switch (f->kind) {
    case FormulaKind::Atom: return true;
    case FormulaKind::Tensor: return top && focusable(f->left, true) && focusable(f->right, true);
    case FormulaKind::Forall: return focusable(f->left, false);
    case FormulaKind::Limp: return provable_shape(f->left) && focusable(f->right, false);
  }
  return false;
}

inline void check_shapes(const std::vector<FormulaPtr>& context, const FormulaPtr& goal) {
  for (const auto& f : context) {
    check_wellformed(f);
    if (!focusable(f, true))
      throw Error(ErrorKind::TensorInConclusion, "tensor in a consequent position: " + print_formula(f));
  }
  check_wellformed(goal);
  if (!provable_shape(goal))
    throw Error(ErrorKind::TensorInConclusion, "tensor in an antecedent's consequent: " + print_formula(goal));
}

// Builds the sequent-calculus proof for a finished branch. Each node's
// context is what its subtree consumes minus what it introduces.
class ProofBuilder {
 public:
  explicit ProofBuilder(const Branch& b) : b_(b) {}

  ProofNode build(const StepPtr& s) {
    std::set<int> consumed, introduced;
    return build(s, consumed, introduced);
  }

 private:
  ProofNode build(const StepPtr& s, std::set<int>& consumed, std::set<int>& introduced) {
    ProofNode n;
    n.rule = s->rule;
    n.goal = b_.u.resolve(s->goal);
    std::set<int> mine_consumed, mine_introduced;
    if (s->principal >= 0) {
      mine_consumed.insert(s->principal);
      n.principal = b_.u.resolve(b_.resources[s->principal]);
    }
    mine_introduced.insert(s->introduced.begin(), s->introduced.end());
    if (s->term) n.term = b_.u.resolve(s->term);
    if (s->proj) n.proj = b_.u.resolve(*s->proj);
    for (const auto& c : s->children) n.children.push_back(build(c, mine_consumed, mine_introduced));
    for (int id : mine_consumed)
      if (!mine_introduced.count(id)) n.context.push_back(b_.u.resolve(b_.resources[id]));
    consumed.insert(mine_consumed.begin(), mine_consumed.end());
    introduced.insert(mine_introduced.begin(), mine_introduced.end());
    return n;
  }

  const Branch& b_;
};

class Search {
 public:
  Search(const Limits& limits, Stats& stats) : limits_(limits), stats_(stats) {}

  // Adds the `pending` resources, splitting tensors with * L, then proves goal.
  Results with_resources(std::vector<int> pending, const FormulaPtr& goal, Branch b, int depth) {
    while (!pending.empty() && b.resources[pending.front()]->kind != FormulaKind::Tensor)
      pending.erase(pending.begin());
    if (pending.empty()) return solve(goal, std::move(b), depth);
    if (!enter(depth)) return {};
    int p = pending.front();
    pending.erase(pending.begin());
    b.available[p] = 0;
    int l = b.add(b.resources[p]->left, true);
    int r = b.add(b.resources[p]->right, true);
    pending.push_back(l);
    pending.push_back(r);
    Results out;
    for (auto& [nb, child] : with_resources(pending, goal, std::move(b), depth + 1))
      out.emplace_back(std::move(nb), make_step({Rule::TensorLeft, goal, p, {l, r}, nullptr, {}, {child}}));
    return out;
  }

  Results solve(const FormulaPtr& goal, Branch b, int depth) {
    if (!enter(depth)) return {};
    switch (goal->kind) {
      case FormulaKind::Limp: {
        std::size_t first = b.resources.size();
        int h = b.add(goal->left, true);
        Results out;
        for (auto& [nb, child] : with_resources({h}, goal->right, std::move(b), depth + 1)) {
          bool discharged = true;
          for (std::size_t i = first; i < nb.available.size(); ++i) discharged = discharged && !nb.available[i];
          if (discharged)
            out.emplace_back(std::move(nb), make_step({Rule::ImpRight, goal, -1, {h}, nullptr, {}, {child}}));
        }
        return out;
      }
      case FormulaKind::Forall: {
        TermPtr term;
        std::optional<Projection> proj;
        if (goal->binder == BinderKind::Projection) proj = b.u.new_proj_eigen(goal->var);
        else term = b.u.new_eigen(goal->var, goal->type);
        FormulaPtr body = open_forall(goal, term, proj ? *proj : Projection());
        Results out;
        for (auto& [nb, child] : solve(body, std::move(b), depth + 1))
          out.emplace_back(std::move(nb), make_step({Rule::ForallRight, goal, -1, {}, term, proj, {child}}));
        return out;
      }
      case FormulaKind::Tensor: {
        Results out;
        for (auto& [lb, lchild] : solve(goal->left, std::move(b), depth + 1))
          for (auto& [rb, rchild] : solve(goal->right, std::move(lb), depth + 1))
            out.emplace_back(std::move(rb),
                             make_step({Rule::TensorRight, goal, -1, {}, nullptr, {}, {lchild, rchild}}));
        return out;
      }
      case FormulaKind::Atom: {
        Results out;
        for (std::size_t r = 0; r < b.resources.size(); ++r) {
          if (!b.available[r]) continue;
          Branch nb = b;
          nb.available[r] = 0;
          for (auto& res : focus(static_cast<int>(r), goal, std::move(nb), depth + 1)) out.push_back(std::move(res));
        }
        return out;
      }
    }
    return {};
  }

 private:
  bool enter(int depth) {
    ++stats_.nodes;
    if (depth > limits_.max_depth) {
      stats_.limit_hit = true;
      return false;
    }
    return true;
  }

  bool attempt(Branch& b, const auto& fn) {
    int before = b.u.ill_typed_attempts();
    bool ok = fn();
    stats_.ill_typed_attempts += b.u.ill_typed_attempts() - before;
    return ok;
  }

  // Left rules on resource `r` (already marked consumed) until its head
  // atom meets the atomic goal.
  Results focus(int r, const FormulaPtr& goal, Branch b, int depth) {
    if (!enter(depth)) return {};
    const FormulaPtr f = b.resources[r];
    switch (f->kind) {
      case FormulaKind::Atom: {
        if (limits_.typed_scope && f->type != goal->type) return {};
        bool ok = attempt(b, [&] { return b.u.unify(f->proj, goal->proj) && b.u.unify(f->meaning, goal->meaning); });
        if (!ok) return {};
        Results out;
        out.emplace_back(std::move(b), make_step({Rule::Axiom, goal, r, {}, nullptr, {}, {}}));
        return out;
      }
      case FormulaKind::Forall: {
        TermPtr term;
        std::optional<Projection> proj;
        if (f->binder == BinderKind::Projection) proj = b.u.new_proj_meta(f->var);
        else term = b.u.new_meta(f->type, f->var);
        int body = b.add(open_forall(f, term, proj ? *proj : Projection()), false);
        Results out;
        for (auto& [nb, child] : focus(body, goal, std::move(b), depth + 1))
          out.emplace_back(std::move(nb), make_step({Rule::ForallLeft, goal, r, {body}, term, proj, {child}}));
        return out;
      }
      case FormulaKind::Limp: {
        int head = b.add(f->right, false);
        Results out;
        for (auto& [hb, hchild] : focus(head, goal, std::move(b), depth + 1))
          for (auto& [ab, achild] : solve(f->left, std::move(hb), depth + 1))
            out.emplace_back(std::move(ab),
                             make_step({Rule::ImpLeft, goal, r, {head}, nullptr, {}, {achild, hchild}}));
        return out;
      }
      case FormulaKind::Tensor:
        return {};
    }
    return {};
  }

  const Limits& limits_;
  Stats& stats_;
};

struct Finished {
  Branch branch;
  StepPtr step;
};

// Runs the search for `context |- goal`; keeps branches that consumed every
// premise and left no delayed constraint.
inline std::vector<Finished> run_search(const std::vector<FormulaPtr>& context, const FormulaPtr& goal, Branch b,
                                        const Limits& limits, Stats& stats) {
  std::vector<int> ids;
  for (const auto& f : context) ids.push_back(b.add(f, true));
  Search search(limits, stats);
  std::vector<Finished> out;
  for (auto& [nb, step] : search.with_resources(ids, goal, std::move(b), 0)) {
    bool all_used = std::none_of(nb.available.begin(), nb.available.end(), [](char c) { return c != 0; });
    if (!all_used) continue;
    if (nb.u.floundered()) {
      ++stats.floundered;
      continue;
    }
    ++stats.proofs;
    out.push_back({std::move(nb), step});
  }
  return out;
}

}  // namespace detail

// All proofs of the sequent within the depth limit, one per distinct
// resolved proof tree.
inline ProofSet prove(const Sequent& s, const Limits& limits = {}) {
  detail::check_shapes(s.context, s.goal);
  ProofSet out;
  std::set<std::string> seen;
  for (auto& done : detail::run_search(s.context, s.goal, {}, limits, out.stats)) {
    ProofNode p = detail::ProofBuilder(done.branch).build(done.step);
    if (seen.insert(proof_to_text(p)).second) out.proofs.push_back(std::move(p));
  }
  return out;
}

namespace detail {
inline std::vector<Reading> distinct_readings(const std::vector<Finished>& finished, const TermPtr& m);
}

inline FormulaPtr reading_goal(const SemProjectionRef& goal, const TermPtr& meaning) {
  return mk_atom(Projection::at(goal.label, goal.facet), meaning, Type::t());
}

// Every alpha-distinct normal meaning M with premises |- goal ~> M.
inline ReadingSet derive_readings(const std::vector<FormulaPtr>& premises, const SemProjectionRef& goal,
                                  const Limits& limits = {}) {
  detail::Branch b;
  TermPtr m = b.u.new_meta(Type::t(), "M");
  FormulaPtr g = reading_goal(goal, m);
  detail::check_shapes(premises, reading_goal(goal, mk_const("_", Type::t())));
  ReadingSet out;
  auto done = detail::run_search(premises, g, std::move(b), limits, out.stats);
  out.readings = detail::distinct_readings(done, m);
  return out;
}

namespace detail {

// Closed meanings of the goal meta, one witness proof per alpha class.
inline std::vector<Reading> distinct_readings(const std::vector<Finished>& finished, const TermPtr& m) {
  std::map<std::string, Reading> by_key;
  for (const auto& done : finished) {
    TermPtr meaning = done.branch.u.resolve(m);
    if (has_metas(meaning) || !free_vars(meaning).empty()) continue;
    std::set<int> eigens;
    collect_eigens(meaning, eigens);
    if (!eigens.empty()) continue;
    std::string key = canonical_key(meaning);
    if (by_key.count(key)) continue;
    by_key.emplace(key, Reading{meaning, ProofBuilder(done.branch).build(done.step)});
  }
  std::vector<Reading> out;
  for (auto& [key, r] : by_key) out.push_back(std::move(r));
  return out;
}

}  // namespace detail

// A proof of a closed formula from no premises.
inline ProofNode prove_theorem(const FormulaPtr& goal, const Limits& limits = {}) {
  ProofSet ps = prove({{}, goal}, limits);
  if (!ps.proofs.empty()) return ps.proofs.front();
  if (ps.stats.limit_hit)
    throw Error(ErrorKind::DepthLimitReached, "no proof within depth " + std::to_string(limits.max_depth));
  throw Error(ErrorKind::NotProvable, "not provable: " + print_formula(goal));
}

}  // namespace glue
