#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "glue/error.hpp"
#include "glue/fstructure.hpp"
#include "glue/normalize.hpp"
#include "glue/term.hpp"

namespace glue {

// Left-hand side of a meaning assignment P ~> M.
struct Projection {
  enum class Kind {
    Ref,    // concrete f_sigma (or one of its facets)
    Var,    // bound by an enclosing forall
    Path,   // lexical template (up PATH).sig, resolved by instantiation
    Meta,   // unification variable during proof search
    Eigen,  // local constant introduced by proof search
  };

  Kind kind = Kind::Ref;
  SemProjectionRef ref;            // Ref; Path uses ref.facet
  std::string name;                // Var, Meta hint, Eigen base name
  std::vector<std::string> path;   // Path
  int id = -1;                     // Meta, Eigen

  static Projection at(std::string label, Facet facet = Facet::Main) {
    Projection p;
    p.ref = {std::move(label), facet};
    return p;
  }
  static Projection var(std::string name) {
    Projection p;
    p.kind = Kind::Var;
    p.name = std::move(name);
    return p;
  }
  static Projection up(std::vector<std::string> path, Facet facet = Facet::Main) {
    Projection p;
    p.kind = Kind::Path;
    p.path = std::move(path);
    p.ref.facet = facet;
    return p;
  }
  static Projection meta(int id, std::string hint) {
    Projection p;
    p.kind = Kind::Meta;
    p.id = id;
    p.name = std::move(hint);
    return p;
  }
  static Projection eigen(int id, std::string base) {
    Projection p;
    p.kind = Kind::Eigen;
    p.id = id;
    p.name = std::move(base);
    return p;
  }

  bool same(const Projection& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
      case Kind::Ref: return ref == o.ref;
      case Kind::Var: return name == o.name;
      case Kind::Path: return path == o.path && ref.facet == o.ref.facet;
      case Kind::Meta:
      case Kind::Eigen: return id == o.id;
    }
    return false;
  }

  std::string str() const {
    switch (kind) {
      case Kind::Ref: return ref.str();
      case Kind::Var: return name;
      case Kind::Path: {
        std::string out = path.empty() ? "^" : "(^";
        for (const auto& a : path) out += " " + a;
        if (!path.empty()) out += ")";
        out += ".sig";
        if (ref.facet != Facet::Main) out += "." + std::string(facet_name(ref.facet));
        return out;
      }
      case Kind::Meta: return "?" + name + std::to_string(id);
      case Kind::Eigen: return name + "#" + std::to_string(id);
    }
    return {};
  }
};

enum class FormulaKind { Atom, Limp, Tensor, Forall };
enum class BinderKind { Meaning, Projection };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Glue formula over the tensor fragment: atoms P ~> M, -o, * and forall.
// Atoms carry the type of their meaning slot; that type indexes the
// ~> relation so scope projections only match proposition-typed atoms.
struct Formula {
  FormulaKind kind;
  Projection proj;      // Atom
  TermPtr meaning;      // Atom
  Type type;            // Atom result type; Forall binder type for meanings
  std::string var;      // Forall
  BinderKind binder = BinderKind::Meaning;
  FormulaPtr left;      // Limp antecedent, Tensor left, Forall body
  FormulaPtr right;     // Limp consequent, Tensor right
};

inline FormulaPtr mk_atom(Projection proj, TermPtr meaning, Type type) {
  return std::make_shared<const Formula>(
      Formula{FormulaKind::Atom, std::move(proj), std::move(meaning), std::move(type)});
}
inline FormulaPtr mk_limp(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<const Formula>(
      Formula{FormulaKind::Limp, {}, nullptr, Type(), {}, BinderKind::Meaning, std::move(a), std::move(b)});
}
inline FormulaPtr mk_tensor(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<const Formula>(
      Formula{FormulaKind::Tensor, {}, nullptr, Type(), {}, BinderKind::Meaning, std::move(a), std::move(b)});
}
inline FormulaPtr mk_forall(std::string var, Type type, FormulaPtr body) {
  return std::make_shared<const Formula>(Formula{FormulaKind::Forall, {}, nullptr, std::move(type),
                                                 std::move(var), BinderKind::Meaning, std::move(body)});
}
inline FormulaPtr mk_forall_projection(std::string var, FormulaPtr body) {
  return std::make_shared<const Formula>(Formula{FormulaKind::Forall, {}, nullptr, Type(),
                                                 std::move(var), BinderKind::Projection, std::move(body)});
}

template <typename AtomFn>
FormulaPtr map_atoms(const FormulaPtr& f, AtomFn&& fn) {
  switch (f->kind) {
    case FormulaKind::Atom:
      return fn(f);
    case FormulaKind::Limp:
      return mk_limp(map_atoms(f->left, fn), map_atoms(f->right, fn));
    case FormulaKind::Tensor:
      return mk_tensor(map_atoms(f->left, fn), map_atoms(f->right, fn));
    case FormulaKind::Forall: {
      Formula copy = *f;
      copy.left = map_atoms(f->left, fn);
      return std::make_shared<const Formula>(std::move(copy));
    }
  }
  return f;
}

template <typename Pred>
bool any_atom(const FormulaPtr& f, Pred&& pred) {
  if (f->kind == FormulaKind::Atom) return pred(*f);
  if (f->left && any_atom(f->left, pred)) return true;
  return f->right && any_atom(f->right, pred);
}

// Replaces the meaning variable `var` by `value` (closed term) below `f`.
inline FormulaPtr instantiate_meaning(const FormulaPtr& f, const std::string& var,
                                      const TermPtr& value) {
  switch (f->kind) {
    case FormulaKind::Atom:
      return mk_atom(f->proj, substitute_unchecked(f->meaning, var, value), f->type);
    case FormulaKind::Limp:
      return mk_limp(instantiate_meaning(f->left, var, value), instantiate_meaning(f->right, var, value));
    case FormulaKind::Tensor:
      return mk_tensor(instantiate_meaning(f->left, var, value),
                       instantiate_meaning(f->right, var, value));
    case FormulaKind::Forall: {
      if (f->binder == BinderKind::Meaning && f->var == var) return f;
      Formula copy = *f;
      copy.left = instantiate_meaning(f->left, var, value);
      return std::make_shared<const Formula>(std::move(copy));
    }
  }
  return f;
}

inline FormulaPtr instantiate_projection(const FormulaPtr& f, const std::string& var,
                                         const Projection& value) {
  switch (f->kind) {
    case FormulaKind::Atom:
      if (f->proj.kind == Projection::Kind::Var && f->proj.name == var)
        return mk_atom(value, f->meaning, f->type);
      return f;
    case FormulaKind::Limp:
      return mk_limp(instantiate_projection(f->left, var, value),
                     instantiate_projection(f->right, var, value));
    case FormulaKind::Tensor:
      return mk_tensor(instantiate_projection(f->left, var, value),
                       instantiate_projection(f->right, var, value));
    case FormulaKind::Forall: {
      if (f->binder == BinderKind::Projection && f->var == var) return f;
      Formula copy = *f;
      copy.left = instantiate_projection(f->left, var, value);
      return std::make_shared<const Formula>(std::move(copy));
    }
  }
  return f;
}

// Body of a forall with its bound variable replaced by a meaning term or a
// projection, whichever the binder ranges over.
inline FormulaPtr open_forall(const FormulaPtr& f, const TermPtr& meaning, const Projection& proj) {
  return f->binder == BinderKind::Meaning ? instantiate_meaning(f->left, f->var, meaning)
                                          : instantiate_projection(f->left, f->var, proj);
}

inline std::string print_formula(const FormulaPtr& f);

namespace detail {

inline std::string print_formula(const FormulaPtr& f, bool nested) {
  switch (f->kind) {
    case FormulaKind::Atom:
      return f->proj.str() + " ~> " + print_term(f->meaning);
    case FormulaKind::Forall: {
      std::string out = "forall ";
      FormulaPtr at = f;
      bool first = true;
      while (at->kind == FormulaKind::Forall) {
        if (!first) out += ", ";
        first = false;
        out += at->var + ":" + (at->binder == BinderKind::Projection ? "proj" : at->type.str());
        at = at->left;
      }
      out += ". " + print_formula(at, false);
      return nested ? "(" + out + ")" : out;
    }
    case FormulaKind::Limp: {
      std::string out = print_formula(f->left, true) + " -o " + print_formula(f->right, false);
      return nested ? "(" + out + ")" : out;
    }
    case FormulaKind::Tensor: {
      std::string rhs = print_formula(f->right, true);
      if (f->right->kind == FormulaKind::Tensor) rhs = "(" + rhs + ")";
      return print_formula(f->left, true) + " * " + rhs;
    }
  }
  return {};
}

inline void formula_key(const FormulaPtr& f, std::vector<std::string>& binders, std::string& out) {
  switch (f->kind) {
    case FormulaKind::Atom: {
      if (f->proj.kind == Projection::Kind::Var) {
        std::size_t depth = 0;
        bool found = false;
        for (std::size_t i = binders.size(); i-- > 0;) {
          if (binders[i] == "@" + f->proj.name) {
            depth = binders.size() - 1 - i;
            found = true;
            break;
          }
        }
        out += found ? "p" + std::to_string(depth) : "P" + f->proj.name;
      } else {
        out += f->proj.str();
      }
      out += "~" + f->type.str() + ":";
      // Meaning variables bound by the formula are numbered like lambda binders.
      std::vector<std::string> meaning_binders;
      for (const auto& b : binders) meaning_binders.push_back(b[0] == '@' ? std::string("\x01") : b);
      nameless(normalize(f->meaning), meaning_binders, out);
      return;
    }
    case FormulaKind::Forall:
      out += f->binder == BinderKind::Projection ? "(Fp " : "(F" + f->type.str() + " ";
      binders.push_back(f->binder == BinderKind::Projection ? "@" + f->var : f->var);
      formula_key(f->left, binders, out);
      binders.pop_back();
      out += ")";
      return;
    case FormulaKind::Limp:
    case FormulaKind::Tensor:
      out += f->kind == FormulaKind::Limp ? "(-o " : "(* ";
      formula_key(f->left, binders, out);
      out += ",";
      formula_key(f->right, binders, out);
      out += ")";
      return;
  }
}

}  // namespace detail

inline std::string print_formula(const FormulaPtr& f) { return detail::print_formula(f, false); }

// Equal keys iff formulas agree up to renaming of bound variables and
// conversion of atom meanings.
inline std::string formula_key(const FormulaPtr& f) {
  std::vector<std::string> binders;
  std::string out;
  detail::formula_key(f, binders, out);
  return out;
}

inline bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  return formula_key(a) == formula_key(b);
}

namespace detail {

inline void check_wellformed(const FormulaPtr& f, TypeEnv& meanings, std::set<std::string>& projections) {
  switch (f->kind) {
    case FormulaKind::Atom: {
      if (f->proj.kind == Projection::Kind::Var && !projections.count(f->proj.name))
        throw Error(ErrorKind::OpenVariable, "projection variable '" + f->proj.name + "' is not bound");
      for (const auto& v : free_vars(f->meaning))
        if (!meanings.count(v))
          throw Error(ErrorKind::OpenVariable, "meaning variable '" + v + "' is not bound in " +
                                                   f->proj.str() + " ~> " + print_term(f->meaning));
      Type actual;
      try {
        actual = typecheck(f->meaning, meanings);
      } catch (const Error& e) {
        throw Error(ErrorKind::AtomTypeMismatch, e.message());
      }
      if (actual != f->type)
        throw Error(ErrorKind::AtomTypeMismatch, "meaning " + print_term(f->meaning) + " has type " +
                                                     actual.str() + " but the atom expects " +
                                                     f->type.str());
      return;
    }
    case FormulaKind::Limp:
    case FormulaKind::Tensor:
      check_wellformed(f->left, meanings, projections);
      check_wellformed(f->right, meanings, projections);
      return;
    case FormulaKind::Forall: {
      if (f->binder == BinderKind::Projection) {
        bool fresh = projections.insert(f->var).second;
        check_wellformed(f->left, meanings, projections);
        if (fresh) projections.erase(f->var);
      } else {
        auto saved = meanings;
        meanings[f->var] = f->type;
        check_wellformed(f->left, meanings, projections);
        meanings = std::move(saved);
      }
      return;
    }
  }
}

inline void flatten_tensor(const FormulaPtr& f, std::vector<FormulaPtr>& out);

}  // namespace detail

// Throws OpenVariable or AtomTypeMismatch; returns normally when `f` is
// closed and every atom's meaning has the atom's declared type.
inline void check_wellformed(const FormulaPtr& f) {
  TypeEnv meanings;
  std::set<std::string> projections;
  detail::check_wellformed(f, meanings, projections);
}

// Replaces tensors in antecedent position: (A * B) -o C becomes A -o B -o C.
inline FormulaPtr curry(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Atom:
      return f;
    case FormulaKind::Forall: {
      Formula copy = *f;
      copy.left = curry(f->left);
      return std::make_shared<const Formula>(std::move(copy));
    }
    case FormulaKind::Tensor:
      throw Error(ErrorKind::TensorInConclusion, "tensor outside antecedent position: " + print_formula(f));
    case FormulaKind::Limp: {
      std::vector<FormulaPtr> parts;
      detail::flatten_tensor(f->left, parts);
      FormulaPtr out = curry(f->right);
      for (auto it = parts.rbegin(); it != parts.rend(); ++it) out = mk_limp(curry(*it), out);
      return out;
    }
  }
  return f;
}

inline void detail::flatten_tensor(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == FormulaKind::Tensor) {
    flatten_tensor(f->left, out);
    flatten_tensor(f->right, out);
  } else {
    out.push_back(f);
  }
}

enum class VarRole { Existential, Universal };

struct QuantifierRole {
  std::string var;
  BinderKind binder;
  VarRole role;
};

// Quantifiers reached with negative polarity (a premise, or the antecedent
// of a positive implication) are instantiated by the prover; positive ones
// become eigenvariables.
inline std::vector<QuantifierRole> polarity_roles(const FormulaPtr& f, bool as_goal = false) {
  std::vector<QuantifierRole> out;
  auto walk = [&](auto&& self, const FormulaPtr& g, bool positive) -> void {
    switch (g->kind) {
      case FormulaKind::Atom:
        return;
      case FormulaKind::Forall:
        out.push_back({g->var, g->binder, positive ? VarRole::Universal : VarRole::Existential});
        self(self, g->left, positive);
        return;
      case FormulaKind::Limp:
        self(self, g->left, !positive);
        self(self, g->right, positive);
        return;
      case FormulaKind::Tensor:
        self(self, g->left, positive);
        self(self, g->right, positive);
        return;
    }
  };
  walk(walk, f, as_goal);
  return out;
}

}  // namespace glue
