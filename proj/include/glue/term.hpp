#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "glue/error.hpp"
#include "glue/types.hpp"

namespace glue {

enum class TermKind { Const, Var, Meta, Lam, App, Intension, Extension };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable node of the meaning language. Constants with id >= 0 are
// eigenvariables (local constants introduced by proof search); metas are
// unification variables owned by a search state.
struct Term {
  TermKind kind;
  std::string name;  // Const, Var, Meta, and the binder of a Lam
  Type type;         // own type for Const/Var/Meta, binder type for Lam
  int id = -1;       // eigen id for Const, meta id for Meta
  TermPtr left;      // Lam body, App function, Intension/Extension body
  TermPtr right;     // App argument

  bool is_eigen() const { return kind == TermKind::Const && id >= 0; }
};

using TypeEnv = std::map<std::string, Type>;

inline TermPtr mk_const(std::string name, Type type) {
  return std::make_shared<const Term>(Term{TermKind::Const, std::move(name), std::move(type)});
}
inline TermPtr mk_eigen(std::string name, Type type, int id) {
  return std::make_shared<const Term>(Term{TermKind::Const, std::move(name), std::move(type), id});
}
inline TermPtr mk_var(std::string name, Type type) {
  return std::make_shared<const Term>(Term{TermKind::Var, std::move(name), std::move(type)});
}
inline TermPtr mk_meta(int id, Type type, std::string hint = "M") {
  return std::make_shared<const Term>(Term{TermKind::Meta, std::move(hint), std::move(type), id});
}
inline TermPtr mk_lam(std::string var, Type type, TermPtr body) {
  return std::make_shared<const Term>(
      Term{TermKind::Lam, std::move(var), std::move(type), -1, std::move(body)});
}
inline TermPtr mk_app(TermPtr fn, TermPtr arg) {
  return std::make_shared<const Term>(
      Term{TermKind::App, {}, Type(), -1, std::move(fn), std::move(arg)});
}
inline TermPtr mk_app(TermPtr fn, const std::vector<TermPtr>& args) {
  for (const auto& a : args) fn = mk_app(std::move(fn), a);
  return fn;
}
inline TermPtr mk_intension(TermPtr body) {
  return std::make_shared<const Term>(Term{TermKind::Intension, {}, Type(), -1, std::move(body)});
}
inline TermPtr mk_extension(TermPtr body) {
  return std::make_shared<const Term>(Term{TermKind::Extension, {}, Type(), -1, std::move(body)});
}

// Q(x, R, S) sugar: Q applied to \x.R and \x.S.
inline TermPtr mk_quant(TermPtr quantifier, const std::string& var, const Type& type,
                        TermPtr restriction, TermPtr scope) {
  return mk_app(std::move(quantifier),
                {mk_lam(var, type, std::move(restriction)), mk_lam(var, type, std::move(scope))});
}

// Splits f(a)(b)... into head f and argument list.
inline std::pair<TermPtr, std::vector<TermPtr>> spine(TermPtr t) {
  std::vector<TermPtr> args;
  while (t->kind == TermKind::App) {
    args.push_back(t->right);
    t = t->left;
  }
  return {t, std::vector<TermPtr>(args.rbegin(), args.rend())};
}

inline void collect_free_vars(const TermPtr& t, std::set<std::string>& bound,
                              std::set<std::string>& out) {
  switch (t->kind) {
    case TermKind::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case TermKind::Const:
    case TermKind::Meta:
      return;
    case TermKind::Lam: {
      bool fresh = bound.insert(t->name).second;
      collect_free_vars(t->left, bound, out);
      if (fresh) bound.erase(t->name);
      return;
    }
    case TermKind::App:
      collect_free_vars(t->left, bound, out);
      collect_free_vars(t->right, bound, out);
      return;
    case TermKind::Intension:
    case TermKind::Extension:
      collect_free_vars(t->left, bound, out);
      return;
  }
}

inline std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> bound, out;
  collect_free_vars(t, bound, out);
  return out;
}

inline bool occurs_free(const TermPtr& t, const std::string& name) {
  return free_vars(t).count(name) > 0;
}

template <typename Pred>
bool any_subterm(const TermPtr& t, Pred&& pred) {
  if (pred(*t)) return true;
  if (t->left && any_subterm(t->left, pred)) return true;
  if (t->right && any_subterm(t->right, pred)) return true;
  return false;
}

inline bool has_metas(const TermPtr& t) {
  return any_subterm(t, [](const Term& n) { return n.kind == TermKind::Meta; });
}

inline bool contains_eigen(const TermPtr& t, int id) {
  return any_subterm(t, [id](const Term& n) { return n.is_eigen() && n.id == id; });
}

inline void collect_eigens(const TermPtr& t, std::set<int>& out) {
  if (t->is_eigen()) out.insert(t->id);
  if (t->left) collect_eigens(t->left, out);
  if (t->right) collect_eigens(t->right, out);
}

inline void collect_metas(const TermPtr& t, std::set<int>& out) {
  if (t->kind == TermKind::Meta) out.insert(t->id);
  if (t->left) collect_metas(t->left, out);
  if (t->right) collect_metas(t->right, out);
}

inline void collect_constant_names(const TermPtr& t, std::set<std::string>& out) {
  if (t->kind == TermKind::Const || t->kind == TermKind::Var) out.insert(t->name);
  if (t->left) collect_constant_names(t->left, out);
  if (t->right) collect_constant_names(t->right, out);
}

inline std::string fresh_name(std::string base, const std::set<std::string>& avoid) {
  while (avoid.count(base)) base += '\'';
  return base;
}

// Capture-avoiding substitution of `value` for free occurrences of `var`.
inline TermPtr substitute_unchecked(const TermPtr& t, const std::string& var, const TermPtr& value,
                                    const std::set<std::string>& value_fv) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == var ? value : t;
    case TermKind::Const:
    case TermKind::Meta:
      return t;
    case TermKind::Lam: {
      if (t->name == var) return t;
      if (!occurs_free(t->left, var)) return t;
      if (value_fv.count(t->name)) {
        std::set<std::string> avoid = value_fv;
        for (const auto& n : free_vars(t->left)) avoid.insert(n);
        avoid.insert(var);
        std::string renamed = fresh_name(t->name, avoid);
        TermPtr body =
            substitute_unchecked(t->left, t->name, mk_var(renamed, t->type), {renamed});
        return mk_lam(renamed, t->type, substitute_unchecked(body, var, value, value_fv));
      }
      return mk_lam(t->name, t->type, substitute_unchecked(t->left, var, value, value_fv));
    }
    case TermKind::App:
      return mk_app(substitute_unchecked(t->left, var, value, value_fv),
                    substitute_unchecked(t->right, var, value, value_fv));
    case TermKind::Intension:
      return mk_intension(substitute_unchecked(t->left, var, value, value_fv));
    case TermKind::Extension:
      return mk_extension(substitute_unchecked(t->left, var, value, value_fv));
  }
  return t;
}

inline TermPtr substitute_unchecked(const TermPtr& t, const std::string& var,
                                    const TermPtr& value) {
  return substitute_unchecked(t, var, value, free_vars(value));
}

inline bool structurally_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Const:
      return a->name == b->name && a->id == b->id;
    case TermKind::Var:
      return a->name == b->name;
    case TermKind::Meta:
      return a->id == b->id;
    case TermKind::Lam:
      return a->name == b->name && a->type == b->type && structurally_equal(a->left, b->left);
    case TermKind::App:
      return structurally_equal(a->left, b->left) && structurally_equal(a->right, b->right);
    case TermKind::Intension:
    case TermKind::Extension:
      return structurally_equal(a->left, b->left);
  }
  return false;
}

// Replaces every occurrence of the closed subterm `target` with `value`.
// Used to abstract over eigenvariables and their intensions.
inline TermPtr replace_closed_subterm(const TermPtr& t, const TermPtr& target,
                                      const TermPtr& value) {
  if (structurally_equal(t, target)) return value;
  switch (t->kind) {
    case TermKind::Lam:
      return mk_lam(t->name, t->type, replace_closed_subterm(t->left, target, value));
    case TermKind::App:
      return mk_app(replace_closed_subterm(t->left, target, value),
                    replace_closed_subterm(t->right, target, value));
    case TermKind::Intension:
      return mk_intension(replace_closed_subterm(t->left, target, value));
    case TermKind::Extension:
      return mk_extension(replace_closed_subterm(t->left, target, value));
    default:
      return t;
  }
}

inline std::string print_term(const TermPtr& t);

inline Type typecheck(const TermPtr& t, const TypeEnv& env = {}) {
  switch (t->kind) {
    case TermKind::Const:
    case TermKind::Meta:
      return t->type;
    case TermKind::Var: {
      auto it = env.find(t->name);
      if (it == env.end())
        throw Error(ErrorKind::UnboundVariable, "variable '" + t->name + "' is not bound");
      return it->second;
    }
    case TermKind::Lam: {
      TypeEnv inner = env;
      inner[t->name] = t->type;
      return Type::arrow(t->type, typecheck(t->left, inner));
    }
    case TermKind::App: {
      Type fn = typecheck(t->left, env);
      Type arg = typecheck(t->right, env);
      if (!fn.is_arrow() || fn.domain() != arg)
        throw Error(ErrorKind::TypeMismatch, "in " + print_term(t) + ": cannot apply " +
                                                 fn.str() + " to " + arg.str());
      return fn.codomain();
    }
    case TermKind::Intension:
      return Type::intension(typecheck(t->left, env));
    case TermKind::Extension: {
      Type body = typecheck(t->left, env);
      if (!body.is_intension())
        throw Error(ErrorKind::ExtensionOfNonIntension,
                    "in " + print_term(t) + ": operand has type " + body.str());
      return body.codomain();
    }
  }
  return Type();
}

// Type-checked substitution of `value` for the variable `var`. Free
// variables of `value` not typed by `env` use their own annotation.
inline TermPtr substitute(const TermPtr& t, const TermPtr& var, const TermPtr& value,
                          const TypeEnv& env = {}) {
  TypeEnv value_env = env;
  any_subterm(value, [&](const Term& n) {
    if (n.kind == TermKind::Var) value_env.emplace(n.name, n.type);
    return false;
  });
  Type vt = typecheck(value, value_env);
  if (vt != var->type)
    throw Error(ErrorKind::TypeMismatch, "cannot substitute " + vt.str() + " value for '" +
                                             var->name + "' of type " + var->type.str());
  return substitute_unchecked(t, var->name, value);
}

}  // namespace glue

#include "glue/print.hpp"
