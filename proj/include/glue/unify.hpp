#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "glue/formula.hpp"
#include "glue/normalize.hpp"
#include "glue/term.hpp"

namespace glue {

// Substitution state of one search branch. Metas record the eigenvariable
// counter at their creation ("level"); a meta may only be instantiated with
// eigenvariables older than itself, which enforces the forall-right side
// condition. Copied wholesale when the search branches.
class Unifier {
 public:
  struct MetaSlot {
    Type type;
    std::string hint;
    int level = 0;
    TermPtr value;
  };
  struct ProjSlot {
    std::string hint;
    int level = 0;
    std::optional<Projection> value;
  };

  TermPtr new_meta(const Type& type, const std::string& hint) {
    int id = static_cast<int>(metas_.size());
    metas_.push_back({type, hint, next_eigen_, nullptr});
    return mk_meta(id, type, hint);
  }
  Projection new_proj_meta(const std::string& hint) {
    int id = static_cast<int>(proj_metas_.size());
    proj_metas_.push_back({hint, next_eigen_, std::nullopt});
    return Projection::meta(id, hint);
  }
  TermPtr new_eigen(const std::string& name, const Type& type) { return mk_eigen(name, type, next_eigen_++); }
  Projection new_proj_eigen(const std::string& name) { return Projection::eigen(next_eigen_++, name); }

  int next_eigen() const { return next_eigen_; }
  int ill_typed_attempts() const { return ill_typed_; }
  bool floundered() const { return !delayed_.empty(); }
  const std::vector<MetaSlot>& metas() const { return metas_; }

  // Current value of `t` with all bound metas replaced, in normal form.
  TermPtr resolve(const TermPtr& t) const { return normalize(instantiate(t)); }

  Projection resolve(const Projection& p) const {
    Projection at = p;
    while (at.kind == Projection::Kind::Meta && proj_metas_[at.id].value) at = *proj_metas_[at.id].value;
    return at;
  }

  FormulaPtr resolve(const FormulaPtr& f) const {
    return map_atoms(f, [&](const FormulaPtr& a) { return mk_atom(resolve(a->proj), resolve(a->meaning), a->type); });
  }

  // On failure the unifier is left in an unspecified state; callers copy
  // before trying alternatives.
  bool unify(const TermPtr& a, const TermPtr& b) { return unify_core(a, b) && settle(); }

  bool unify(const Projection& a, const Projection& b) {
    Projection x = resolve(a), y = resolve(b);
    if (x.same(y)) return true;
    bool ok = x.kind == Projection::Kind::Meta ? bind(x.id, y) : y.kind == Projection::Kind::Meta && bind(y.id, x);
    return ok && settle();
  }

 private:
  TermPtr instantiate(const TermPtr& t) const {
    switch (t->kind) {
      case TermKind::Meta:
        return metas_[t->id].value ? instantiate(metas_[t->id].value) : t;
      case TermKind::Const:
      case TermKind::Var:
        return t;
      case TermKind::Lam: {
        TermPtr body = instantiate(t->left);
        return body == t->left ? t : mk_lam(t->name, t->type, body);
      }
      case TermKind::App: {
        TermPtr fn = instantiate(t->left), arg = instantiate(t->right);
        return fn == t->left && arg == t->right ? t : mk_app(fn, arg);
      }
      case TermKind::Intension: {
        TermPtr body = instantiate(t->left);
        return body == t->left ? t : mk_intension(body);
      }
      case TermKind::Extension: {
        TermPtr body = instantiate(t->left);
        return body == t->left ? t : mk_extension(body);
      }
    }
    return t;
  }

  static bool stuck(const TermPtr& head) {
    if (head->kind == TermKind::Meta) return true;
    if (head->kind != TermKind::Extension && head->kind != TermKind::Intension) return false;
    return stuck(spine(head->left).first);
  }

  bool unify_core(const TermPtr& a0, const TermPtr& b0) {
    TermPtr a = resolve(a0), b = resolve(b0);
    if (canonical_key(a) == canonical_key(b)) return true;
    if (a->kind == TermKind::Lam || b->kind == TermKind::Lam) {
      Type dom = a->kind == TermKind::Lam ? a->type : b->type;
      TermPtr c = new_eigen("#", dom);
      auto open = [&](const TermPtr& t) {
        return t->kind == TermKind::Lam ? substitute_unchecked(t->left, t->name, c) : mk_app(t, c);
      };
      return unify_core(open(a), open(b));
    }
    auto [ha, as] = spine(a);
    auto [hb, bs] = spine(b);
    if (ha->kind == TermKind::Meta && as.empty()) return bind(ha->id, b);
    if (hb->kind == TermKind::Meta && bs.empty()) return bind(hb->id, a);
    if (ha->kind == TermKind::Meta && hb->kind != TermKind::Meta) return flex(ha, as, b);
    if (hb->kind == TermKind::Meta && ha->kind != TermKind::Meta) return flex(hb, bs, a);
    if (stuck(ha) || stuck(hb)) {
      delayed_.emplace_back(a, b);
      return true;
    }
    if (as.size() != bs.size() || ha->kind != hb->kind) return false;
    switch (ha->kind) {
      case TermKind::Const:
        if (ha->name != hb->name || ha->id != hb->id) return false;
        break;
      case TermKind::Intension:
      case TermKind::Extension:
        if (!unify_core(ha->left, hb->left)) return false;
        break;
      default:
        return false;
    }
    for (std::size_t i = 0; i < as.size(); ++i)
      if (!unify_core(as[i], bs[i])) return false;
    return true;
  }

  // m(args) = rhs with m unbound.
  bool flex(const TermPtr& m, const std::vector<TermPtr>& args, const TermPtr& rhs) {
    if (args.empty()) return bind(m->id, rhs);
    const MetaSlot& slot = metas_[m->id];
    std::set<int> seen;
    for (const auto& arg : args) {
      const TermPtr& c = arg->kind == TermKind::Intension ? arg->left : arg;
      if (!c->is_eigen() || c->id < slot.level || !seen.insert(c->id).second) {
        delayed_.emplace_back(mk_app(m, args), rhs);
        return true;
      }
    }
    if (has_metas(rhs)) {
      delayed_.emplace_back(mk_app(m, args), rhs);
      return true;
    }
    // Abstract the argument eigens; ^c abstracts as v and a bare c as !v.
    TermPtr body = rhs;
    std::vector<TermPtr> vars;
    for (std::size_t i = 0; i < args.size(); ++i) {
      TermPtr arg = args[i];
      TermPtr v = mk_var("%" + std::to_string(fresh_++), arg->kind == TermKind::Intension ? Type::intension(arg->left->type)
                                                                                   : arg->type);
      if (arg->kind == TermKind::Intension) {
        body = replace_closed_subterm(body, arg, v);
        body = replace_closed_subterm(body, arg->left, mk_extension(v));
      } else {
        body = replace_closed_subterm(body, arg, v);
      }
      vars.push_back(v);
    }
    for (std::size_t i = vars.size(); i-- > 0;) body = mk_lam(vars[i]->name, vars[i]->type, body);
    return bind(m->id, normalize(body));
  }

  bool bind(int id, const TermPtr& rhs) {
    if (rhs->kind == TermKind::Meta && rhs->id == id) return true;
    MetaSlot& slot = metas_[id];
    Type actual;
    try {
      actual = typecheck(rhs);
    } catch (const Error&) {
      ++ill_typed_;
      return false;
    }
    if (actual != slot.type) {
      ++ill_typed_;
      return false;
    }
    std::set<int> inner;
    collect_metas(rhs, inner);
    if (inner.count(id)) return false;
    std::set<int> eigens;
    collect_eigens(rhs, eigens);
    if (!eigens.empty() && *eigens.rbegin() >= slot.level) return false;
    for (int other : inner) metas_[other].level = std::min(metas_[other].level, slot.level);
    slot.value = rhs;
    ++bindings_;
    return true;
  }

  bool bind(int id, const Projection& value) {
    ProjSlot& slot = proj_metas_[id];
    if (value.kind == Projection::Kind::Eigen && value.id >= slot.level) return false;
    if (value.kind == Projection::Kind::Meta)
      proj_metas_[value.id].level = std::min(proj_metas_[value.id].level, slot.level);
    slot.value = value;
    ++bindings_;
    return true;
  }

  // Retries delayed constraints until no new binding is made.
  bool settle() {
    if (settling_) return true;
    settling_ = true;
    bool ok = true;
    while (ok && !delayed_.empty()) {
      long before = bindings_;
      auto pending = std::move(delayed_);
      delayed_.clear();
      for (const auto& [a, b] : pending) {
        if (!unify_core(a, b)) {
          ok = false;
          break;
        }
      }
      if (bindings_ == before) break;
    }
    settling_ = false;
    return ok;
  }

  std::vector<MetaSlot> metas_;
  std::vector<ProjSlot> proj_metas_;
  std::vector<std::pair<TermPtr, TermPtr>> delayed_;
  int next_eigen_ = 0;
  int ill_typed_ = 0;
  long bindings_ = 0;
  int fresh_ = 0;
  bool settling_ = false;
};

}  // namespace glue
