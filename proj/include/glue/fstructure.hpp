#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glue/error.hpp"
#include "glue/syntax.hpp"
#include "json.hpp"

namespace glue {

enum class Facet { Main, Var, Restr };

inline std::string_view facet_name(Facet f) {
  switch (f) {
    case Facet::Main: return "";
    case Facet::Var: return "VAR";
    case Facet::Restr: return "RESTR";
  }
  return "";
}

// Semantic projection of an f-structure node, optionally one of the
// VAR/RESTR facets that determiner premises address.
struct SemProjectionRef {
  std::string label;
  Facet facet = Facet::Main;

  std::string str() const {
    std::string out = label + ".sig";
    if (facet != Facet::Main) out += "." + std::string(facet_name(facet));
    return out;
  }
  friend bool operator==(const SemProjectionRef&, const SemProjectionRef&) = default;
  friend auto operator<=>(const SemProjectionRef&, const SemProjectionRef&) = default;
};

struct FValue {
  bool atomic = true;
  std::string text;  // symbol when atomic, node label otherwise
};

struct FNode {
  std::string label;
  std::vector<std::pair<std::string, FValue>> attrs;

  const FValue* find(std::string_view attr) const {
    for (const auto& [name, value] : attrs)
      if (name == attr) return &value;
    return nullptr;
  }
};

// An f-structure is a rooted DAG of labeled attribute-value nodes.
class FStructure {
 public:
  FStructure() = default;
  FStructure(std::string root, std::map<std::string, FNode> nodes)
      : root_(std::move(root)), nodes_(std::move(nodes)) {
    validate();
  }

  const std::string& root() const { return root_; }
  const std::map<std::string, FNode>& nodes() const { return nodes_; }
  bool has(const std::string& label) const { return nodes_.count(label) > 0; }

  const FNode& node(const std::string& label) const {
    auto it = nodes_.find(label);
    if (it == nodes_.end()) throw Error(ErrorKind::UnknownLabel, "no f-structure labeled '" + label + "'");
    return it->second;
  }

  // Atomic value of `attr` at `label`, or empty when absent.
  std::string atom(const std::string& label, std::string_view attr) const {
    const FValue* v = node(label).find(attr);
    return v && v->atomic ? v->text : std::string();
  }

  std::string resolve_path(const std::string& start, const std::vector<std::string>& path) const {
    std::string at = start;
    node(at);
    for (const auto& attr : path) {
      const FValue* v = node(at).find(attr);
      if (!v) throw Error(ErrorKind::MissingAttribute, "(" + at + " " + attr + ") is undefined");
      if (v->atomic)
        throw Error(ErrorKind::AtomicValueOnPath,
                    "(" + at + " " + attr + ") is the atomic value '" + v->text + "'");
      at = v->text;
    }
    return at;
  }

  std::string str() const {
    std::set<std::string> printed;
    return print_node(root_, printed);
  }

  nlohmann::ordered_json to_json() const {
    std::set<std::string> printed;
    return json_node(root_, printed);
  }

 private:
  void validate() const {
    node(root_);
    for (const auto& [label, n] : nodes_) {
      std::set<std::string> seen;
      for (const auto& [attr, value] : n.attrs) {
        if (!seen.insert(attr).second)
          throw Error(ErrorKind::DuplicateAttribute, "attribute " + attr + " repeated in " + label);
        if (!value.atomic && !nodes_.count(value.text))
          throw Error(ErrorKind::UnknownLabel, "reference to undefined node '" + value.text + "'");
      }
    }
    std::map<std::string, int> state;  // 1 = on stack, 2 = done
    std::function<void(const std::string&)> visit = [&](const std::string& label) {
      int& s = state[label];
      if (s == 1) throw Error(ErrorKind::CyclicStructure, "node '" + label + "' contains itself");
      if (s == 2) return;
      s = 1;
      for (const auto& [attr, value] : nodes_.at(label).attrs)
        if (!value.atomic) visit(value.text);
      state[label] = 2;
    };
    for (const auto& [label, n] : nodes_) visit(label);
  }

  std::string print_node(const std::string& label, std::set<std::string>& printed) const {
    if (!printed.insert(label).second) return label;
    std::string out = label + ":[";
    bool first = true;
    for (const auto& [attr, value] : node(label).attrs) {
      if (!first) out += ", ";
      first = false;
      out += attr + " ";
      out += value.atomic ? "'" + value.text + "'" : print_node(value.text, printed);
    }
    return out + "]";
  }

  nlohmann::ordered_json json_node(const std::string& label, std::set<std::string>& printed) const {
    nlohmann::ordered_json out;
    out["label"] = label;
    if (!printed.insert(label).second) return out;
    nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
    for (const auto& [attr, value] : node(label).attrs)
      attrs[attr] = value.atomic ? nlohmann::ordered_json(value.text) : json_node(value.text, printed);
    out["attrs"] = attrs;
    return out;
  }

  std::string root_;
  std::map<std::string, FNode> nodes_;
};

namespace detail {

class FStructureParser {
 public:
  explicit FStructureParser(Lexer& lex) : lex_(lex) {}

  FStructure parse() {
    std::string root = parse_node();
    return FStructure(root, std::move(nodes_));
  }

 private:
  std::string parse_node() {
    std::size_t pos = lex_.peek().pos;
    std::string label = lex_.expect_ident();
    if (!lex_.accept(":")) return label;  // re-entrant reference to a labeled node
    if (nodes_.count(label))
      throw Error(ErrorKind::DuplicateLabel,
                  "duplicate label '" + label + "' at offset " + std::to_string(pos));
    FNode n{label, {}};
    nodes_[label] = n;
    lex_.expect("[");
    std::set<std::string> seen;
    while (!lex_.is("]")) {
      std::size_t attr_pos = lex_.peek().pos;
      std::string attr = lex_.expect_ident();
      if (!seen.insert(attr).second)
        throw Error(ErrorKind::DuplicateAttribute,
                    "attribute " + attr + " repeated in " + label + " (offset " +
                        std::to_string(attr_pos) + ")");
      FValue value;
      if (lex_.peek().kind == Token::Kind::Quoted) {
        value = {true, lex_.next().text};
      } else if (lex_.is_ident()) {
        value = {false, parse_node()};
      } else {
        lex_.fail("expected quoted symbol or f-structure");
      }
      n.attrs.emplace_back(attr, value);
      lex_.accept(",");
    }
    lex_.expect("]");
    nodes_[label] = std::move(n);
    return label;
  }

  Lexer& lex_;
  std::map<std::string, FNode> nodes_;
};

}  // namespace detail

inline FStructure parse_fstructure(Lexer& lex) {
  return detail::FStructureParser(lex).parse();
}

// Bracketed AVM syntax: f:[PRED 'leave', SUBJ g:[PRED 'Bill']]. A bare label
// in value position re-enters an already labeled node.
inline FStructure parse_fstructure(std::string_view text) {
  Lexer lex(text);
  FStructure fs = parse_fstructure(lex);
  if (!lex.at_end()) lex.fail("trailing input after f-structure");
  return fs;
}

inline FStructure parse_fstructure_json(const nlohmann::ordered_json& j) {
  std::map<std::string, FNode> nodes;
  std::function<std::string(const nlohmann::ordered_json&)> walk = [&](const nlohmann::ordered_json& obj) {
    if (!obj.is_object() || !obj.contains("label") || !obj["label"].is_string())
      throw Error(ErrorKind::SyntaxError, "f-structure node needs a string 'label'");
    std::string label = obj["label"];
    if (!obj.contains("attrs")) return label;
    if (nodes.count(label)) throw Error(ErrorKind::DuplicateLabel, "duplicate label '" + label + "'");
    nodes[label] = FNode{label, {}};
    FNode n{label, {}};
    for (const auto& [attr, value] : obj["attrs"].items()) {
      if (value.is_string())
        n.attrs.emplace_back(attr, FValue{true, value.get<std::string>()});
      else
        n.attrs.emplace_back(attr, FValue{false, walk(value)});
    }
    nodes[label] = std::move(n);
    return label;
  };
  std::string root = walk(j);
  return FStructure(root, std::move(nodes));
}

inline FStructure load_fstructure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(buf.str());
    } catch (const nlohmann::ordered_json::parse_error& e) {
      throw Error(ErrorKind::SyntaxError, path + ": " + e.what());
    }
    return parse_fstructure_json(j);
  }
  return parse_fstructure(buf.str());
}

}  // namespace glue
