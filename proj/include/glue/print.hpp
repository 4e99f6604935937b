#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "glue/term.hpp"

namespace glue {

namespace detail {

// Readable printer. Bound variables get fresh display names chosen by
// traversal order, so alpha-variants print identically.
class TermPrinter {
 public:
  explicit TermPrinter(const TermPtr& root) {
    any_subterm(root, [this](const Term& n) {
      if (n.kind == TermKind::Const) reserved_.insert(n.name);
      return false;
    });
    for (const auto& v : free_vars(root)) reserved_.insert(v);
  }

  std::string print(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::Const:
        return t->is_eigen() ? t->name + "#" + std::to_string(t->id) : t->name;
      case TermKind::Var:
        return lookup(t->name);
      case TermKind::Meta:
        return "?" + t->name + std::to_string(t->id);
      case TermKind::Lam: {
        std::string shown = choose(t->type);
        scope_.emplace_back(t->name, shown);
        std::string body = print(t->left);
        scope_.pop_back();
        return "\\" + shown + ":" + t->type.str() + ". " + body;
      }
      case TermKind::Intension:
        return "^" + print(t->left);
      case TermKind::Extension:
        return "!" + print(t->left);
      case TermKind::App:
        return print_application(t);
    }
    return {};
  }

 private:
  std::string print_application(const TermPtr& t) {
    auto [head, args] = spine(t);
    Type bound;
    if (head->kind == TermKind::Const && !head->is_eigen() && args.size() == 2 &&
        is_quantifier_type(head->type, &bound))
      return print_quantifier(head->name, bound, args[0], args[1]);

    std::string out;
    if (head->kind == TermKind::Const || head->kind == TermKind::Var ||
        head->kind == TermKind::Meta)
      out = print(head);
    else
      out = "(" + print(head) + ")";
    out += "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ", ";
      out += print(args[i]);
    }
    return out + ")";
  }

  std::string print_quantifier(const std::string& q, const Type& bound, const TermPtr& restr,
                               const TermPtr& scope) {
    std::string shown = choose(bound);
    std::string placeholder = "#q" + std::to_string(placeholder_++);
    scope_.emplace_back(placeholder, shown);
    std::string r = print_body(restr, placeholder, bound);
    std::string s = print_body(scope, placeholder, bound);
    scope_.pop_back();
    return q + "(" + shown + ", " + r + ", " + s + ")";
  }

  // Prints `fn` applied to the placeholder variable, opening a lambda when
  // one is present instead of printing a redex.
  std::string print_body(const TermPtr& fn, const std::string& placeholder, const Type& bound) {
    if (fn->kind == TermKind::Lam) {
      scope_.emplace_back(fn->name, scope_.back().second);
      std::string out = print(fn->left);
      scope_.pop_back();
      return out;
    }
    return print(mk_app(fn, mk_var(placeholder, bound)));
  }

  std::string lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return it->second;
    return name;
  }

  bool in_use(const std::string& name) const {
    if (reserved_.count(name)) return true;
    for (const auto& [raw, shown] : scope_)
      if (shown == name) return true;
    return false;
  }

  std::string choose(const Type& type) {
    static const std::vector<std::string> entity = {"z", "u", "v", "w"};
    static const std::vector<std::string> intension = {"P", "Q", "R", "T"};
    static const std::vector<std::string> other = {"x", "y"};
    const auto& pool = type == Type::e()          ? entity
                       : type.is_intension()      ? intension
                                                  : other;
    for (int round = 0;; ++round) {
      for (const auto& base : pool) {
        std::string name = round == 0 ? base : base + std::to_string(round);
        if (!in_use(name)) return name;
      }
    }
  }

  std::set<std::string> reserved_;
  std::vector<std::pair<std::string, std::string>> scope_;
  int placeholder_ = 0;
};

}  // namespace detail

// Canonical textual rendering; the output re-parses with parse_term.
inline std::string print_term(const TermPtr& t) { return detail::TermPrinter(t).print(t); }

}  // namespace glue
