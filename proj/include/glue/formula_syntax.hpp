#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glue/formula.hpp"
#include "glue/syntax.hpp"

namespace glue {

// Glue syntax:
//   formula := 'forall' binder (',' binder)* '.' formula | tensor ('-o' formula)?
//   binder  := name ':' (type | 'proj')
//   tensor  := unary ('*' unary)*
//   unary   := '(' formula ')' | projection '~>' term
//   projection := label '.sig' ['.' facet] | projvar
//               | '^' '.sig' ['.' facet] | '(' '^' attr+ ')' '.sig' ['.' facet]
// `up` may be written instead of `^` in templates.
class FormulaParser {
 public:
  FormulaParser(Lexer& lex, const Signature& sig) : lex_(lex), sig_(sig) {}

  FormulaPtr parse() {
    if (lex_.is_keyword("forall")) {
      lex_.next();
      std::vector<std::pair<std::string, std::optional<Type>>> binders;
      do {
        std::string name = lex_.expect_ident();
        lex_.expect(":");
        if (lex_.is_keyword("proj")) {
          lex_.next();
          binders.emplace_back(name, std::nullopt);
        } else {
          binders.emplace_back(name, parse_type(lex_));
        }
      } while (lex_.accept(","));
      lex_.expect(".");
      for (const auto& [name, ty] : binders)
        if (ty) meanings_.emplace_back(name, *ty);
      FormulaPtr body = parse();
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        if (it->second) {
          meanings_.pop_back();
          body = mk_forall(it->first, *it->second, body);
        } else {
          body = mk_forall_projection(it->first, body);
        }
      }
      return body;
    }
    FormulaPtr lhs = parse_tensor();
    if (lex_.accept("-o")) return mk_limp(lhs, parse());
    return lhs;
  }

 private:
  bool is_up(std::size_t ahead) const { return lex_.is("^", ahead) || lex_.is_keyword("up", ahead); }

  FormulaPtr parse_tensor() {
    FormulaPtr lhs = parse_unary();
    while (lex_.accept("*")) lhs = mk_tensor(lhs, parse_unary());
    return lhs;
  }

  FormulaPtr parse_unary() {
    if (lex_.is("(") && !(is_up(1) && lex_.is_ident(2))) {
      lex_.next();
      FormulaPtr inner = parse();
      lex_.expect(")");
      return inner;
    }
    Projection proj = parse_projection();
    lex_.expect("~>");
    TermPtr meaning = parse_term(lex_, sig_, meanings_);
    TypeEnv env(meanings_.begin(), meanings_.end());
    Type type;
    try {
      type = typecheck(meaning, env);
    } catch (const Error& e) {
      throw Error(ErrorKind::AtomTypeMismatch, e.message());
    }
    return mk_atom(std::move(proj), std::move(meaning), std::move(type));
  }

  Facet parse_facet() {
    if (!lex_.accept(".")) return Facet::Main;
    std::string facet = lex_.expect_ident();
    if (facet == "VAR") return Facet::Var;
    if (facet == "RESTR") return Facet::Restr;
    lex_.fail("unknown projection facet '" + facet + "'");
  }

  void expect_sig() {
    lex_.expect(".");
    if (!lex_.is_keyword("sig")) lex_.fail("expected 'sig'");
    lex_.next();
  }

  Projection parse_projection() {
    if (lex_.is("(")) {
      lex_.next();
      lex_.next();  // ^ or up
      std::vector<std::string> path;
      while (lex_.is_ident()) path.push_back(lex_.next().text);
      lex_.expect(")");
      expect_sig();
      return Projection::up(std::move(path), parse_facet());
    }
    if (is_up(0)) {
      lex_.next();
      expect_sig();
      return Projection::up({}, parse_facet());
    }
    std::string name = lex_.expect_ident();
    if (lex_.is(".") && lex_.is_keyword("sig", 1)) {
      expect_sig();
      return Projection::at(name, parse_facet());
    }
    return Projection::var(name);
  }

  Lexer& lex_;
  const Signature& sig_;
  std::vector<std::pair<std::string, Type>> meanings_;
};

inline FormulaPtr parse_formula(Lexer& lex, const Signature& sig) {
  return FormulaParser(lex, sig).parse();
}

inline FormulaPtr parse_formula(std::string_view text, const Signature& sig) {
  Lexer lex(text);
  FormulaPtr f = parse_formula(lex, sig);
  if (!lex.at_end()) lex.fail("trailing input after formula");
  return f;
}

}  // namespace glue
