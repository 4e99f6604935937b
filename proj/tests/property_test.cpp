#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <random>

#include "glue/oracle.hpp"
#include "glue/prover.hpp"
#include "support.hpp"

namespace glue {
namespace {

using test::corpus_problem;

const std::vector<std::string> kCorpusScenarios = {"bill-left",           "bill-left-json", "every-man-left",
                                                   "bill-seeks-al",       "seeks-a-unicorn", "bill-finds-a-unicorn",
                                                   "conversation"};

std::vector<std::string> keys_of(const ReadingSet& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs.readings) out.push_back(canonical_key(r.meaning));
  return out;
}

void check_all(const ReadingSet& rs, const std::vector<FormulaPtr>& premises, const SemProjectionRef& goal) {
  for (const auto& r : rs.readings) check_proof(r.proof, {premises, reading_goal(goal, r.meaning)});
}

// --- random well-typed terms ---------------------------------------------

class TermGen {
 public:
  explicit TermGen(unsigned seed) : rng_(seed) {
    sig_ = test::english_lexicon().signature;
    sig_["rain"] = Type::t();
  }

  const Signature& signature() const { return sig_; }

  TermPtr gen(const Type& ty, int depth) {
    std::vector<TermPtr> leaves;
    for (const auto& [name, t] : sig_)
      if (t == ty) leaves.push_back(mk_const(name, t));
    std::set<std::string> shadowed;
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (shadowed.insert(it->first).second && it->second == ty) leaves.push_back(mk_var(it->first, it->second));
    if (!leaves.empty() && (depth <= 0 || pick(4) == 0)) return leaves[pick(leaves.size())];
    if (depth <= 0) return fallback(ty);
    switch (pick(5)) {
      case 0:
        if (ty.is_arrow()) return lam(ty, depth);
        break;
      case 1:
        if (ty.is_intension()) return mk_intension(gen(ty.codomain(), depth - 1));
        break;
      case 2:
        return mk_extension(gen(Type::intension(ty), depth - 1));
      case 3: {
        // explicit beta redex
        Type arg = arg_type();
        std::string v = fresh();
        scope_.emplace_back(v, arg);
        TermPtr body = gen(ty, depth - 1);
        scope_.pop_back();
        return mk_app(mk_lam(v, arg, body), gen(arg, depth - 1));
      }
      default:
        break;
    }
    Type arg = arg_type();
    return mk_app(gen(Type::arrow(arg, ty), depth - 1), gen(arg, depth - 1));
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  Type arg_type() {
    static const Type options[] = {Type::e(), Type::e(), Type::t(), Type::arrow(Type::e(), Type::t()),
                                   Type::intension(Type::arrow(Type::e(), Type::t()))};
    return options[pick(5)];
  }

  std::string fresh() { return "v" + std::to_string(counter_++); }

  TermPtr lam(const Type& ty, int depth) {
    std::string v = pick(3) == 0 && !scope_.empty() ? scope_.back().first : fresh();  // some shadowing
    scope_.emplace_back(v, ty.domain());
    TermPtr body = gen(ty.codomain(), depth - 1);
    scope_.pop_back();
    return mk_lam(v, ty.domain(), body);
  }

  TermPtr fallback(const Type& ty) {
    if (ty.is_arrow()) return lam(ty, 0);
    if (ty == Type::e()) return mk_const("Bill", ty);
    return mk_const("rain", ty);
  }

  std::mt19937 rng_;
  Signature sig_;
  std::vector<std::pair<std::string, Type>> scope_;
  int counter_ = 0;
};

bool has_redex(const TermPtr& t) {
  return any_subterm(t, [](const Term& n) {
    return (n.kind == TermKind::App && n.left->kind == TermKind::Lam) ||
           (n.kind == TermKind::Extension && n.left->kind == TermKind::Intension);
  });
}

TEST(PropertyTest, NormalizationOnRandomTerms) {
  TermGen gen(20261018);
  const Type types[] = {Type::t(), Type::e(), Type::arrow(Type::e(), Type::t()),
                        Type::intension(Type::arrow(Type::e(), Type::t()))};
  for (int i = 0; i < 10000; ++i) {
    const Type& ty = types[i % 4];
    TermPtr t = gen.gen(ty, 2 + i % 5);
    ASSERT_EQ(typecheck(t), ty) << print_term(t);
    TermPtr n = normalize(t);
    ASSERT_EQ(typecheck(n), ty) << print_term(t);
    ASSERT_TRUE(alpha_equal(normalize(n), n)) << print_term(t);
    ASSERT_FALSE(has_redex(n)) << print_term(n);
    // !^ elimination
    ASSERT_TRUE(alpha_equal(normalize(mk_extension(mk_intension(t))), n)) << print_term(t);
    // canonical printing re-parses to the same normal form
    TermPtr back = normalize(parse_term(print_term(n), gen.signature()));
    ASSERT_TRUE(alpha_equal(back, n)) << print_term(n);
  }
}

// --- corpus-wide properties ---------------------------------------------

TEST(PropertyTest, CorpusProofsAreLinearAndOracleAgrees) {
  for (const auto& name : kCorpusScenarios) {
    auto p = corpus_problem(name);
    ASSERT_LE(p.premises.size(), 8u);
    ReadingSet main = derive_readings(p.premises, p.goal);
    ReadingSet oracle = oracle_enumerate(p.premises, p.goal);
    check_all(main, p.premises, p.goal);
    check_all(oracle, p.premises, p.goal);
    EXPECT_EQ(keys_of(main), keys_of(oracle)) << name;
    EXPECT_FALSE(main.stats.limit_hit) << name;
  }
}

TEST(PropertyTest, PermutationInvariance) {
  for (const auto& name : kCorpusScenarios) {
    auto p = corpus_problem(name);
    auto base = keys_of(derive_readings(p.premises, p.goal));
    std::vector<std::size_t> order(p.premises.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    int perms = 0;
    do {
      std::vector<FormulaPtr> shuffled;
      for (auto i : order) shuffled.push_back(p.premises[i]);
      ReadingSet rs = derive_readings(shuffled, p.goal);
      ASSERT_EQ(keys_of(rs), base) << name << " permutation " << perms;
      check_all(rs, shuffled, p.goal);
      ++perms;
    } while (std::next_permutation(order.begin(), order.end()));
    EXPECT_GE(perms, 1);
  }
}

TEST(PropertyTest, ReadingCountsAreStableAtDoubleDepth) {
  const std::map<std::string, std::size_t> counts = {{"bill-left", 1},       {"every-man-left", 1},
                                                     {"bill-seeks-al", 1},   {"seeks-a-unicorn", 2},
                                                     {"conversation", 5}};
  for (const auto& [name, want] : counts) {
    auto p = corpus_problem(name);
    int minimal = 0;
    for (int d = 1; d <= 64; ++d) {
      Limits l;
      l.max_depth = d;
      if (derive_readings(p.premises, p.goal, l).readings.size() == want) {
        minimal = d;
        break;
      }
    }
    ASSERT_GT(minimal, 0) << name;
    Limits twice;
    twice.max_depth = 2 * minimal;
    auto at_min = derive_readings(p.premises, p.goal, Limits{minimal, true});
    auto at_twice = derive_readings(p.premises, p.goal, twice);
    EXPECT_EQ(at_twice.readings.size(), want) << name;
    EXPECT_EQ(keys_of(at_min), keys_of(at_twice)) << name;
  }
}

TEST(PropertyTest, CurriedPremisesGiveTheSameReadings) {
  for (const auto& name : kCorpusScenarios) {
    auto p = corpus_problem(name);
    std::vector<FormulaPtr> curried;
    for (const auto& f : p.premises) curried.push_back(curry(f));
    EXPECT_EQ(keys_of(derive_readings(curried, p.goal)), keys_of(derive_readings(p.premises, p.goal))) << name;
  }
}

// --- randomized small scenarios -----------------------------------------

struct NP {
  const char* entry;
  const char* attrs;
  bool quantified;
};

const NP kNPs[] = {
    {"Bill", "PRED 'Bill'", false},
    {"Al", "PRED 'Al'", false},
    {"every-man", "SPEC 'every', PRED 'man'", true},
    {"a-unicorn", "SPEC 'a', PRED 'unicorn'", true},
    {"every-unicorn", "SPEC 'every', PRED 'unicorn'", true},
};

TEST(PropertyTest, RandomScenarios) {
  std::mt19937 rng(7);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const Lexicon& lex = test::english_lexicon();
  int with_readings = 0;
  for (int i = 0; i < 1000; ++i) {
    static const char* verbs[][2] = {{"left", "leave"}, {"find", "find"}, {"seek", "seek"}};
    std::size_t v = pick(3);
    const NP& subj = kNPs[pick(5)];
    const NP& obj = kNPs[pick(5)];
    bool transitive = v != 0;
    bool stray = pick(10) == 0;  // an extra, unconsumable premise
    std::string fs = std::string("f:[PRED '") + verbs[v][1] + "', SUBJ g:[" + subj.attrs + "]";
    if (transitive) fs += std::string(", OBJ h:[") + obj.attrs + "]";
    if (stray) fs += ", ADJ k:[PRED 'Al']";
    fs += "]";
    Scenario sc;
    sc.fstructure = parse_fstructure(fs);
    sc.goal = {"f", Facet::Main};
    sc.attachments = {{verbs[v][0], "f"}, {subj.entry, "g"}};
    if (transitive) sc.attachments.emplace_back(obj.entry, "h");
    if (stray) sc.attachments.emplace_back("Al", "k");
    std::vector<FormulaPtr> prem;
    for (const auto& nf : premises(sc, lex)) prem.push_back(nf.formula);
    std::shuffle(prem.begin(), prem.end(), rng);

    ReadingSet rs = derive_readings(prem, sc.goal);
    check_all(rs, prem, sc.goal);
    ReadingSet oracle = oracle_enumerate(prem, sc.goal);
    ASSERT_EQ(keys_of(rs), keys_of(oracle)) << fs;
    if (!rs.readings.empty()) ++with_readings;

    std::size_t quantified = (subj.quantified ? 1 : 0) + (transitive && obj.quantified ? 1 : 0);
    std::size_t expected = quantified == 2 ? 2 : 1;
    if (v == 2 && obj.quantified) expected = subj.quantified ? 3 : 2;  // de dicto + de re scopings
    if (stray) expected = 0;
    ASSERT_EQ(rs.readings.size(), expected) << fs;
  }
  EXPECT_GT(with_readings, 800);
}

}  // namespace
}  // namespace glue
