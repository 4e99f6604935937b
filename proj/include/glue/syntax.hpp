#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glue/error.hpp"
#include "glue/term.hpp"
#include "glue/types.hpp"

namespace glue {

// Types of meaning-language constants, e.g. leave : e->t.
using Signature = std::map<std::string, Type>;

struct Token {
  enum class Kind { Ident, Quoted, Punct, End } kind = Kind::End;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { tokens_ = tokenize(); }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = index_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  Token next() {
    Token t = peek();
    if (index_ < tokens_.size() - 1) ++index_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool is(std::string_view punct, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Punct && t.text == punct;
  }
  bool is_ident(std::size_t ahead = 0) const { return peek(ahead).kind == Token::Kind::Ident; }
  bool is_keyword(std::string_view word, std::size_t ahead = 0) const {
    return is_ident(ahead) && peek(ahead).text == word;
  }

  bool accept(std::string_view punct) {
    if (!is(punct)) return false;
    next();
    return true;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }
  std::string expect_ident() {
    if (!is_ident()) fail("expected identifier");
    return next().text;
  }

  [[noreturn]] void fail(const std::string& what) const { fail_at(peek().pos, what); }

  [[noreturn]] void fail_at(std::size_t pos, const std::string& what) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string found = peek().kind == Token::Kind::End ? "end of input" : "'" + peek().text + "'";
    throw Error(ErrorKind::SyntaxError, what + " at " + std::to_string(line) + ":" +
                                            std::to_string(col) + " (found " + found + ")");
  }

 private:
  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    std::size_t i = 0;
    while (true) {
      while (i < src_.size() && std::isspace(static_cast<unsigned char>(src_[i]))) ++i;
      if (i >= src_.size()) break;
      std::size_t start = i;
      char c = src_[i];
      if (ident_start(c)) {
        while (i < src_.size()) {
          if (ident_char(src_[i])) {
            ++i;
          } else if (src_[i] == '-' && i + 1 < src_.size() &&
                     std::isalpha(static_cast<unsigned char>(src_[i + 1])) &&
                     !(src_[i + 1] == 'o' &&
                       (i + 2 >= src_.size() || !ident_char(src_[i + 2])))) {
            ++i;  // hyphenated names such as conv-with or OBL-WITH
          } else {
            break;
          }
        }
        out.push_back({Token::Kind::Ident, std::string(src_.substr(start, i - start)), start});
        continue;
      }
      if (c == '\'') {
        std::size_t close = src_.find('\'', i + 1);
        if (close == std::string_view::npos) fail_at(start, "unterminated quoted symbol");
        out.push_back({Token::Kind::Quoted, std::string(src_.substr(i + 1, close - i - 1)), start});
        i = close + 1;
        continue;
      }
      static const char* multi[] = {"~>", "-o", "->"};
      bool matched = false;
      for (const char* m : multi) {
        if (src_.substr(i, 2) == m) {
          out.push_back({Token::Kind::Punct, m, start});
          i += 2;
          matched = true;
          break;
        }
      }
      if (matched) continue;
      static const std::string_view singles = "()[]{},.:\\^!*=;";
      if (singles.find(c) == std::string_view::npos)
        fail_at(start, std::string("unexpected character '") + c + "'");
      out.push_back({Token::Kind::Punct, std::string(1, c), start});
      ++i;
    }
    out.push_back({Token::Kind::End, "", src_.size()});
    return out;
  }

  std::string_view src_;
  std::vector<Token> tokens_{{Token::Kind::End, "", 0}};
  std::size_t index_ = 0;
};

// type := base ('->' type)?   base := e | t | s | '(' type ')'
inline Type parse_type(Lexer& lex) {
  Type lhs;
  if (lex.accept("(")) {
    lhs = parse_type(lex);
    lex.expect(")");
  } else {
    std::string name = lex.expect_ident();
    if (name == "e") lhs = Type::e();
    else if (name == "t") lhs = Type::t();
    else if (name == "s") lhs = Type::s();
    else lex.fail("unknown base type '" + name + "'");
  }
  if (lex.accept("->")) return Type::arrow(lhs, parse_type(lex));
  return lhs;
}

inline Type parse_type(std::string_view text) {
  Lexer lex(text);
  Type ty = parse_type(lex);
  if (!lex.at_end()) lex.fail("trailing input after type");
  return ty;
}

// Term syntax:
//   term    := '\' x ':' type '.' term | '^' term | '!' term | postfix
//   postfix := atom ('(' term (',' term)* ')')*
//   atom    := ident | '(' term ')'
// Q(x, R, S) with Q a quantifier constant and x a fresh name abbreviates
// Q(\x.R, \x.S).
class TermParser {
 public:
  TermParser(Lexer& lex, const Signature& sig, std::vector<std::pair<std::string, Type>> scope = {})
      : lex_(lex), sig_(sig), scope_(std::move(scope)) {}

  TermPtr parse() {
    if (lex_.accept("\\")) {
      std::string var = lex_.expect_ident();
      lex_.expect(":");
      Type ty = parse_type(lex_);
      lex_.expect(".");
      scope_.emplace_back(var, ty);
      TermPtr body = parse();
      scope_.pop_back();
      return mk_lam(var, ty, body);
    }
    if (lex_.accept("^")) return mk_intension(parse());
    if (lex_.accept("!")) return mk_extension(parse());
    return parse_postfix();
  }

 private:
  TermPtr parse_postfix() {
    std::size_t head_pos = lex_.peek().pos;
    TermPtr head;
    std::string head_name;
    if (lex_.accept("(")) {
      head = parse();
      lex_.expect(")");
    } else {
      head_name = lex_.expect_ident();
      if (lex_.is("(")) {
        Type bound;
        auto c = sig_.find(head_name);
        if (!bound_type(head_name) && c != sig_.end() && is_quantifier_type(c->second, &bound) &&
            lex_.is_ident(1) && lex_.is(",", 2) && !bound_type(lex_.peek(1).text) &&
            !sig_.count(lex_.peek(1).text))
          return parse_quantifier(mk_const(head_name, c->second), bound);
      }
      head = resolve(head_name, head_pos);
    }
    while (lex_.accept("(")) {
      std::vector<TermPtr> args{parse()};
      while (lex_.accept(",")) args.push_back(parse());
      lex_.expect(")");
      head = mk_app(head, args);
    }
    return head;
  }

  TermPtr parse_quantifier(TermPtr q, const Type& bound) {
    lex_.expect("(");
    std::string var = lex_.expect_ident();
    lex_.expect(",");
    scope_.emplace_back(var, bound);
    TermPtr restriction = parse();
    lex_.expect(",");
    TermPtr body = parse();
    scope_.pop_back();
    lex_.expect(")");
    return mk_quant(std::move(q), var, bound, restriction, body);
  }

  const Type* bound_type(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }

  TermPtr resolve(const std::string& name, std::size_t pos) {
    if (const Type* ty = bound_type(name)) return mk_var(name, *ty);
    auto c = sig_.find(name);
    if (c != sig_.end()) return mk_const(name, c->second);
    std::string where = std::to_string(pos);
    throw Error(ErrorKind::UnboundVariable,
                "'" + name + "' is neither bound nor a declared constant (offset " + where + ")");
  }

  Lexer& lex_;
  const Signature& sig_;
  std::vector<std::pair<std::string, Type>> scope_;
};

inline TermPtr parse_term(Lexer& lex, const Signature& sig,
                          std::vector<std::pair<std::string, Type>> scope = {}) {
  return TermParser(lex, sig, std::move(scope)).parse();
}

inline TermPtr parse_term(std::string_view text, const Signature& sig,
                          std::vector<std::pair<std::string, Type>> scope = {}) {
  Lexer lex(text);
  TermPtr t = parse_term(lex, sig, std::move(scope));
  if (!lex.at_end()) lex.fail("trailing input after term");
  return t;
}

// Parses `name : type` declarations separated by newlines or ';'.
inline Signature parse_signature(std::string_view text) {
  Signature sig;
  Lexer lex(text);
  while (!lex.at_end()) {
    if (lex.accept(";")) continue;
    std::string name = lex.expect_ident();
    lex.expect(":");
    sig[name] = parse_type(lex);
  }
  return sig;
}

}  // namespace glue
