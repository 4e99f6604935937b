#pragma once

#include <string>
#include <vector>

#include "glue/lexicon.hpp"

namespace glue::test {

inline const std::string kCorpus = GLUE_CORPUS_DIR;

inline const Lexicon& english_lexicon() {
  static const Lexicon lex = load_lexicon(kCorpus + "/english.lex");
  return lex;
}

inline FormulaPtr formula(std::string_view text) { return parse_formula(text, english_lexicon().signature); }
inline TermPtr term(std::string_view text) { return parse_term(text, english_lexicon().signature); }

struct Problem {
  std::vector<FormulaPtr> premises;
  SemProjectionRef goal;
};

inline Problem corpus_problem(const std::string& name) {
  Scenario sc = load_scenario(kCorpus + "/" + name + "/scenario");
  Problem p{{}, sc.goal};
  for (const auto& nf : premises(sc, english_lexicon())) p.premises.push_back(nf.formula);
  return p;
}

}  // namespace glue::test
