#pragma once

#include <memory>
#include <string>

namespace glue {

// Simple types of the meaning language: base e, t, s and arrows.
// The intension of a type T is represented as s -> T.
class Type {
 public:
  enum class Kind { Entity, Truth, Index, Arrow };

  Type() : Type(Kind::Truth) {}

  static Type e() { return Type(Kind::Entity); }
  static Type t() { return Type(Kind::Truth); }
  static Type s() { return Type(Kind::Index); }
  static Type arrow(const Type& domain, const Type& codomain) {
    Type out(Kind::Arrow);
    out.domain_ = std::make_shared<const Type>(domain);
    out.codomain_ = std::make_shared<const Type>(codomain);
    return out;
  }
  static Type intension(const Type& of) { return arrow(s(), of); }

  Kind kind() const { return kind_; }
  bool is_arrow() const { return kind_ == Kind::Arrow; }
  const Type& domain() const { return *domain_; }
  const Type& codomain() const { return *codomain_; }

  // s -> T
  bool is_intension() const { return is_arrow() && domain().kind() == Kind::Index; }

  friend bool operator==(const Type& a, const Type& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ != Kind::Arrow) return true;
    return a.domain() == b.domain() && a.codomain() == b.codomain();
  }
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }

  std::string str() const {
    switch (kind_) {
      case Kind::Entity: return "e";
      case Kind::Truth: return "t";
      case Kind::Index: return "s";
      case Kind::Arrow: break;
    }
    std::string lhs = domain().str();
    if (domain().is_arrow()) lhs = "(" + lhs + ")";
    return lhs + "->" + codomain().str();
  }

 private:
  explicit Type(Kind k) : kind_(k) {}

  Kind kind_;
  std::shared_ptr<const Type> domain_;
  std::shared_ptr<const Type> codomain_;
};

// (T -> t) -> (T -> t) -> t, the shape of a generalized quantifier constant.
inline bool is_quantifier_type(const Type& ty, Type* bound = nullptr) {
  if (!ty.is_arrow()) return false;
  const Type& restr = ty.domain();
  if (!restr.is_arrow() || restr.codomain() != Type::t()) return false;
  const Type& rest = ty.codomain();
  if (!rest.is_arrow() || rest.domain() != restr || rest.codomain() != Type::t())
    return false;
  if (bound) *bound = restr.domain();
  return true;
}

}  // namespace glue
