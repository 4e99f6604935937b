#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glue/error.hpp"
#include "glue/formula.hpp"
#include "glue/formula_syntax.hpp"
#include "glue/fstructure.hpp"
#include "glue/syntax.hpp"

namespace glue {

// Meaning-constructor template over the up metavariable, usable at any
// node whose attributes satisfy `requires_` (normally just PRED).
struct LexicalEntry {
  std::string headword;
  std::vector<std::pair<std::string, std::string>> requires_;
  FormulaPtr glue;
};

struct Lexicon {
  Signature signature;
  std::map<std::string, LexicalEntry> entries;

  const LexicalEntry& entry(const std::string& headword) const {
    auto it = entries.find(headword);
    if (it == entries.end()) throw Error(ErrorKind::UnknownEntry, "no lexical entry '" + headword + "'");
    return it->second;
  }
};

struct NamedFormula {
  std::string name;
  FormulaPtr formula;
};

struct Scenario {
  std::string name;
  FStructure fstructure;
  std::vector<std::pair<std::string, std::string>> attachments;  // headword, node label
  std::vector<std::string> premise_texts;                        // already instantiated
  Signature extra_constants;
  SemProjectionRef goal;
  std::string lexicon_path;  // resolved relative to the scenario file; may be empty
};

inline FormulaPtr instantiate(const LexicalEntry& entry, const std::string& node, const FStructure& fs) {
  for (const auto& [attr, value] : entry.requires_) {
    std::string actual = fs.atom(node, attr);
    if (actual != value)
      throw Error(ErrorKind::PredMismatch, "entry '" + entry.headword + "' needs (" + node + " " + attr +
                                               ") = '" + value + "' but found '" + actual + "'");
  }
  FormulaPtr out = map_atoms(entry.glue, [&](const FormulaPtr& atom) {
    if (atom->proj.kind != Projection::Kind::Path) return atom;
    std::string label = fs.resolve_path(node, atom->proj.path);
    return mk_atom(Projection::at(label, atom->proj.ref.facet), atom->meaning, atom->type);
  });
  check_wellformed(out);
  return out;
}

// One premise per attachment; a top-level tensor of independent
// constraints contributes each conjunct separately.
inline std::vector<NamedFormula> premises(const Scenario& scenario, const Lexicon& lexicon) {
  std::vector<NamedFormula> out;
  auto add = [&](const std::string& name, const FormulaPtr& f) {
    std::vector<FormulaPtr> parts;
    detail::flatten_tensor(f, parts);
    for (std::size_t i = 0; i < parts.size(); ++i)
      out.push_back({parts.size() == 1 ? name : name + "." + std::to_string(i + 1), parts[i]});
  };
  for (const auto& [headword, node] : scenario.attachments)
    add(headword, instantiate(lexicon.entry(headword), node, scenario.fstructure));
  Signature sig = lexicon.signature;
  for (const auto& [name, ty] : scenario.extra_constants) sig[name] = ty;
  for (std::size_t i = 0; i < scenario.premise_texts.size(); ++i) {
    FormulaPtr f = parse_formula(scenario.premise_texts[i], sig);
    check_wellformed(f);
    add("premise" + std::to_string(i + 1), f);
  }
  return out;
}

namespace detail {

struct Field {
  std::string key;
  std::string value;
  std::size_t line;
};

inline std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Splits a line-oriented file into `key value...` fields. A line whose first
// word is not a known key continues the previous field. `ATTR = value`
// lines become "=" fields.
inline std::vector<Field> split_fields(std::string_view text, const std::vector<std::string>& keys,
                                       const std::string& source) {
  std::vector<Field> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::string first = line.substr(0, line.find_first_of(" \t"));
    bool is_key = false;
    for (const auto& k : keys) is_key = is_key || k == first;
    std::smatch m;
    static const std::regex constraint(R"(^([A-Z][A-Z0-9-]*)\s*=\s*'?([^'\s]+)'?$)");
    if (is_key) {
      out.push_back({first, trim(line.substr(first.size())), lineno});
    } else if (std::regex_match(line, m, constraint)) {
      out.push_back({"=", m[1].str() + " " + m[2].str(), lineno});
    } else if (!out.empty()) {
      out.back().value += "\n" + line;
    } else {
      throw Error(ErrorKind::SyntaxError, source + ":" + std::to_string(lineno) + ": unexpected '" + first + "'");
    }
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::pair<std::string, std::string> split_word(const std::string& value) {
  std::size_t sp = value.find_first_of(" \t\n");
  if (sp == std::string::npos) return {value, {}};
  return {value.substr(0, sp), trim(value.substr(sp + 1))};
}

template <typename Fn>
auto at_line(const std::string& source, std::size_t line, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), source + ":" + std::to_string(line) + ": " + e.message());
  }
}

}  // namespace detail

// Lexicon format:
//   const NAME : TYPE
//   entry HEADWORD
//     PRED = symbol            (any number of ATTR = symbol constraints)
//     glue FORMULA             (may continue on following lines)
inline Lexicon parse_lexicon(std::string_view text, const std::string& source = "<lexicon>") {
  Lexicon lex;
  auto fields = detail::split_fields(text, {"const", "entry", "glue"}, source);
  for (const auto& f : fields) {
    if (f.key != "const") continue;
    detail::at_line(source, f.line, [&] {
      Signature one = parse_signature(f.value);
      lex.signature.insert(one.begin(), one.end());
      return 0;
    });
  }
  LexicalEntry* current = nullptr;
  for (const auto& f : fields) {
    if (f.key == "const") continue;
    detail::at_line(source, f.line, [&] {
      if (f.key == "entry") {
        if (lex.entries.count(f.value))
          throw Error(ErrorKind::SyntaxError, "duplicate entry '" + f.value + "'");
        current = &lex.entries[f.value];
        current->headword = f.value;
        return 0;
      }
      if (!current) throw Error(ErrorKind::SyntaxError, f.key + " outside an entry");
      if (f.key == "=") {
        auto [attr, value] = detail::split_word(f.value);
        current->requires_.emplace_back(attr, value);
      } else {
        current->glue = parse_formula(f.value, lex.signature);
        check_wellformed(current->glue);
      }
      return 0;
    });
  }
  for (const auto& [name, entry] : lex.entries)
    if (!entry.glue) throw Error(ErrorKind::SyntaxError, source + ": entry '" + name + "' has no glue");
  return lex;
}

inline Lexicon load_lexicon(const std::string& path) {
  return parse_lexicon(detail::read_file(path), path);
}

// Scenario format:
//   name NAME
//   lexicon PATH               (relative to the scenario file)
//   fstructure AVM | fstructure-file PATH (.json selects the JSON mirror)
//   attach HEADWORD LABEL
//   premise FORMULA            (an already instantiated premise)
//   const NAME : TYPE
//   goal LABEL.sig
inline Scenario parse_scenario(std::string_view text, const std::string& source = "<scenario>",
                               const std::filesystem::path& base_dir = {}) {
  Scenario sc;
  bool have_fs = false, have_goal = false;
  auto fields = detail::split_fields(
      text, {"name", "lexicon", "fstructure", "fstructure-file", "attach", "premise", "const", "goal"}, source);
  for (const auto& f : fields) {
    detail::at_line(source, f.line, [&] {
      if (f.key == "name") {
        sc.name = f.value;
      } else if (f.key == "lexicon") {
        sc.lexicon_path = (base_dir / f.value).string();
      } else if (f.key == "fstructure") {
        sc.fstructure = parse_fstructure(f.value);
        have_fs = true;
      } else if (f.key == "fstructure-file") {
        sc.fstructure = load_fstructure((base_dir / f.value).string());
        have_fs = true;
      } else if (f.key == "attach") {
        auto [headword, label] = detail::split_word(f.value);
        if (label.empty()) throw Error(ErrorKind::SyntaxError, "attach needs HEADWORD LABEL");
        sc.attachments.emplace_back(headword, label);
      } else if (f.key == "premise") {
        sc.premise_texts.push_back(f.value);
      } else if (f.key == "const") {
        Signature one = parse_signature(f.value);
        sc.extra_constants.insert(one.begin(), one.end());
      } else if (f.key == "goal") {
        Lexer lex(f.value);
        std::string label = lex.expect_ident();
        lex.expect(".");
        if (!lex.is_keyword("sig")) lex.fail("expected 'sig'");
        lex.next();
        if (!lex.at_end()) lex.fail("goal must be a main projection LABEL.sig");
        sc.goal = {label, Facet::Main};
        have_goal = true;
      }
      return 0;
    });
  }
  if (!have_goal) throw Error(ErrorKind::SyntaxError, source + ": missing goal");
  if (!sc.attachments.empty() && !have_fs)
    throw Error(ErrorKind::SyntaxError, source + ": attachments need an fstructure");
  for (const auto& [headword, label] : sc.attachments)
    if (!sc.fstructure.has(label))
      throw Error(ErrorKind::UnknownLabel, source + ": attach " + headword + " to unknown node '" + label + "'");
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::filesystem::path p(path);
  Scenario sc = parse_scenario(detail::read_file(path), path, p.parent_path());
  if (sc.name.empty()) sc.name = p.filename() == "scenario" ? p.parent_path().filename().string() : p.stem().string();
  return sc;
}

}  // namespace glue
