#pragma once

#include <string>
#include <vector>

#include "glue/term.hpp"

namespace glue {

// beta-normal, eta-contracted form with every !^M collapsed to M.
inline TermPtr normalize(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Const:
    case TermKind::Var:
    case TermKind::Meta:
      return t;
    case TermKind::Lam: {
      TermPtr body = normalize(t->left);
      if (body->kind == TermKind::App && body->right->kind == TermKind::Var &&
          body->right->name == t->name && !occurs_free(body->left, t->name))
        return body->left;
      if (body == t->left) return t;
      return mk_lam(t->name, t->type, body);
    }
    case TermKind::App: {
      TermPtr fn = normalize(t->left);
      TermPtr arg = normalize(t->right);
      if (fn->kind == TermKind::Lam) return normalize(substitute_unchecked(fn->left, fn->name, arg));
      if (fn == t->left && arg == t->right) return t;
      return mk_app(fn, arg);
    }
    case TermKind::Intension: {
      TermPtr body = normalize(t->left);
      return body == t->left ? t : mk_intension(body);
    }
    case TermKind::Extension: {
      TermPtr body = normalize(t->left);
      if (body->kind == TermKind::Intension) return body->left;
      return body == t->left ? t : mk_extension(body);
    }
  }
  return t;
}

namespace detail {

inline void nameless(const TermPtr& t, std::vector<std::string>& binders, std::string& out) {
  switch (t->kind) {
    case TermKind::Const:
      out += "C" + t->name;
      if (t->is_eigen()) out += "#" + std::to_string(t->id);
      out += ' ';
      return;
    case TermKind::Var:
      for (std::size_t i = binders.size(); i-- > 0;) {
        if (binders[i] == t->name) {
          out += "B" + std::to_string(binders.size() - 1 - i) + ' ';
          return;
        }
      }
      out += "V" + t->name + ' ';
      return;
    case TermKind::Meta:
      out += "M" + std::to_string(t->id) + ' ';
      return;
    case TermKind::Lam:
      out += "(L" + t->type.str() + ' ';
      binders.push_back(t->name);
      nameless(t->left, binders, out);
      binders.pop_back();
      out += ')';
      return;
    case TermKind::App:
      out += "(A ";
      nameless(t->left, binders, out);
      nameless(t->right, binders, out);
      out += ')';
      return;
    case TermKind::Intension:
      out += "(I ";
      nameless(t->left, binders, out);
      out += ')';
      return;
    case TermKind::Extension:
      out += "(E ";
      nameless(t->left, binders, out);
      out += ')';
      return;
  }
}

}  // namespace detail

// De Bruijn rendering: equal strings iff the terms are alpha-equivalent.
inline std::string canonical_key(const TermPtr& t) {
  std::vector<std::string> binders;
  std::string out;
  detail::nameless(t, binders, out);
  return out;
}

inline bool alpha_equal(const TermPtr& a, const TermPtr& b) {
  return canonical_key(a) == canonical_key(b);
}

// Equality modulo alpha, beta, eta and the !^ law.
inline bool convertible(const TermPtr& a, const TermPtr& b) {
  return alpha_equal(normalize(a), normalize(b));
}

}  // namespace glue
