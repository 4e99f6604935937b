#pragma once

#include <optional>
#include <vector>

#include "glue/prover.hpp"

namespace glue {

namespace detail {

// Brute-force enumeration: every context split is fixed up front. A goal
// atom picks a context formula, strips it to its head, and hands the rest
// of the context to the antecedents in every possible assignment.
class Oracle {
 public:
  Oracle(const Limits& limits, Stats& stats) : limits_(limits), stats_(stats) {}

  Results prove(std::vector<int> ctx, const FormulaPtr& goal, Branch b, int depth) {
    ++stats_.nodes;
    if (depth > limits_.max_depth) {
      stats_.limit_hit = true;
      return {};
    }
    // * L on any tensor in the context, first.
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      const FormulaPtr f = b.resources[ctx[i]];
      if (f->kind != FormulaKind::Tensor) continue;
      int p = ctx[i];
      ctx.erase(ctx.begin() + static_cast<long>(i));
      ctx.push_back(b.add(f->left, false));
      ctx.push_back(b.add(f->right, false));
      int l = ctx[ctx.size() - 2], r = ctx.back();
      Results out;
      for (auto& [nb, child] : prove(ctx, goal, std::move(b), depth + 1))
        out.emplace_back(std::move(nb), make_step({Rule::TensorLeft, goal, p, {l, r}, nullptr, {}, {child}}));
      return out;
    }
    switch (goal->kind) {
      case FormulaKind::Limp: {
        int h = b.add(goal->left, false);
        ctx.push_back(h);
        Results out;
        for (auto& [nb, child] : prove(ctx, goal->right, std::move(b), depth + 1))
          out.emplace_back(std::move(nb), make_step({Rule::ImpRight, goal, -1, {h}, nullptr, {}, {child}}));
        return out;
      }
      case FormulaKind::Forall: {
        TermPtr term;
        std::optional<Projection> proj;
        if (goal->binder == BinderKind::Projection) proj = b.u.new_proj_eigen(goal->var);
        else term = b.u.new_eigen(goal->var, goal->type);
        FormulaPtr body = open_forall(goal, term, proj ? *proj : Projection());
        Results out;
        for (auto& [nb, child] : prove(ctx, body, std::move(b), depth + 1))
          out.emplace_back(std::move(nb), make_step({Rule::ForallRight, goal, -1, {}, term, proj, {child}}));
        return out;
      }
      case FormulaKind::Tensor: {
        Results out;
        std::size_t n = ctx.size();
        for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
          std::vector<int> left, right;
          for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? left : right).push_back(ctx[i]);
          for (auto& [lb, lchild] : prove(left, goal->left, b, depth + 1))
            for (auto& [rb, rchild] : prove(right, goal->right, std::move(lb), depth + 1))
              out.emplace_back(std::move(rb),
                               make_step({Rule::TensorRight, goal, -1, {}, nullptr, {}, {lchild, rchild}}));
        }
        return out;
      }
      case FormulaKind::Atom: {
        Results out;
        for (std::size_t i = 0; i < ctx.size(); ++i) {
          std::vector<int> rest = ctx;
          rest.erase(rest.begin() + static_cast<long>(i));
          for (auto& res : use(ctx[i], rest, goal, b, depth + 1)) out.push_back(std::move(res));
        }
        return out;
      }
    }
    return {};
  }

 private:
  struct Link {
    Rule rule;
    int principal;
    int introduced;
    TermPtr term;
    std::optional<Projection> proj;
    FormulaPtr antecedent;  // ImpLeft
  };

  Results use(int r, const std::vector<int>& rest, const FormulaPtr& goal, Branch b, int depth) {
    std::vector<Link> chain;
    int at = r;
    while (b.resources[at]->kind == FormulaKind::Forall || b.resources[at]->kind == FormulaKind::Limp) {
      const FormulaPtr f = b.resources[at];
      if (f->kind == FormulaKind::Forall) {
        TermPtr term;
        std::optional<Projection> proj;
        if (f->binder == BinderKind::Projection) proj = b.u.new_proj_meta(f->var);
        else term = b.u.new_meta(f->type, f->var);
        int body = b.add(open_forall(f, term, proj ? *proj : Projection()), false);
        chain.push_back({Rule::ForallLeft, at, body, term, proj, nullptr});
        at = body;
      } else {
        int head = b.add(f->right, false);
        chain.push_back({Rule::ImpLeft, at, head, nullptr, std::nullopt, f->left});
        at = head;
      }
    }
    const FormulaPtr head = b.resources[at];
    if (head->kind != FormulaKind::Atom) return {};
    if (limits_.typed_scope && head->type != goal->type) return {};
    int before = b.u.ill_typed_attempts();
    bool ok = b.u.unify(head->proj, goal->proj) && b.u.unify(head->meaning, goal->meaning);
    stats_.ill_typed_attempts += b.u.ill_typed_attempts() - before;
    if (!ok) return {};

    std::vector<std::size_t> antecedents;
    for (std::size_t k = 0; k < chain.size(); ++k)
      if (chain[k].rule == Rule::ImpLeft) antecedents.push_back(k);
    std::size_t m = antecedents.size();
    if (m == 0 && !rest.empty()) return {};
    int sub_depth = depth + static_cast<int>(chain.size());

    Results out;
    std::vector<std::size_t> choice(rest.size(), 0);
    while (true) {
      std::vector<std::vector<int>> parts(m);
      for (std::size_t i = 0; i < rest.size(); ++i) parts[choice[i]].push_back(rest[i]);
      // Prove antecedents in order, threading the substitution.
      std::vector<std::pair<Branch, std::vector<StepPtr>>> partial;
      partial.push_back({b, {}});
      for (std::size_t a = 0; a < m; ++a) {
        std::vector<std::pair<Branch, std::vector<StepPtr>>> next;
        for (auto& [pb, steps] : partial) {
          for (auto& [nb, s] : prove(parts[a], chain[antecedents[a]].antecedent, pb, sub_depth + 1)) {
            auto more = steps;
            more.push_back(s);
            next.push_back({std::move(nb), std::move(more)});
          }
        }
        partial = std::move(next);
      }
      for (auto& [pb, steps] : partial) out.emplace_back(std::move(pb), assemble(chain, steps, goal, at));
      // next assignment of the remaining context to antecedents
      std::size_t i = 0;
      while (i < choice.size() && ++choice[i] == m) choice[i++] = 0;
      if (i == choice.size()) break;
    }
    return out;
  }

  static StepPtr assemble(const std::vector<Link>& chain, const std::vector<StepPtr>& ante, const FormulaPtr& goal,
                          int head) {
    StepPtr node = make_step({Rule::Axiom, goal, head, {}, nullptr, {}, {}});
    std::size_t a = ante.size();
    for (std::size_t k = chain.size(); k-- > 0;) {
      const Link& l = chain[k];
      if (l.rule == Rule::ForallLeft)
        node = make_step({Rule::ForallLeft, goal, l.principal, {l.introduced}, l.term, l.proj, {node}});
      else
        node = make_step({Rule::ImpLeft, goal, l.principal, {l.introduced}, nullptr, {}, {ante[--a], node}});
    }
    return node;
  }

  const Limits& limits_;
  Stats& stats_;
};

}  // namespace detail

// Same contract as derive_readings, by exhaustive eager search. Meant for
// small premise sets.
inline ReadingSet oracle_enumerate(const std::vector<FormulaPtr>& premises, const SemProjectionRef& goal,
                                   const Limits& limits = {}) {
  detail::Branch b;
  TermPtr m = b.u.new_meta(Type::t(), "M");
  FormulaPtr g = reading_goal(goal, m);
  detail::check_shapes(premises, reading_goal(goal, mk_const("_", Type::t())));
  std::vector<int> ctx;
  for (const auto& f : premises) ctx.push_back(b.add(f, false));
  ReadingSet out;
  std::vector<detail::Finished> finished;
  detail::Oracle oracle(limits, out.stats);
  for (auto& [nb, step] : oracle.prove(ctx, g, std::move(b), 0)) {
    if (nb.u.floundered()) {
      ++out.stats.floundered;
      continue;
    }
    ++out.stats.proofs;
    finished.push_back({std::move(nb), step});
  }
  out.readings = detail::distinct_readings(finished, m);
  return out;
}

}  // namespace glue
