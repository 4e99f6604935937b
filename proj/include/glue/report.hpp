#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <future>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "glue/lexicon.hpp"
#include "glue/oracle.hpp"
#include "glue/prover.hpp"
#include "json.hpp"

namespace glue {

struct RunOptions {
  Limits limits;
  bool trace = false;
  bool oracle = false;
  std::string lexicon_path;  // overrides the scenario's own lexicon line
};

struct RunReport {
  std::string scenario;
  std::vector<TermPtr> meanings;
  std::vector<std::string> readings;  // canonical printed terms, in canonical order
  std::vector<ProofNode> proofs;      // filled with --trace
  double millis = 0;
  Stats stats;
  bool oracle_ran = false;
  std::vector<std::string> oracle_missing;  // found by the oracle only
  std::vector<std::string> oracle_extra;    // found by the prover only

  std::size_t count() const { return readings.size(); }
  bool oracle_agrees() const { return oracle_missing.empty() && oracle_extra.empty(); }
};

// Accepts a scenario file or a directory holding one named `scenario`.
inline std::string scenario_file(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::is_directory(path)) return (fs::path(path) / "scenario").string();
  return path;
}

inline Lexicon lexicon_for(const Scenario& sc, const RunOptions& opts) {
  std::string path = opts.lexicon_path.empty() ? sc.lexicon_path : opts.lexicon_path;
  if (path.empty()) return Lexicon{};
  return load_lexicon(path);
}

inline RunReport run_scenario(const Scenario& sc, const Lexicon& lex, const RunOptions& opts) {
  RunReport report;
  report.scenario = sc.name;
  auto start = std::chrono::steady_clock::now();
  std::vector<FormulaPtr> prem;
  for (const auto& nf : premises(sc, lex)) prem.push_back(nf.formula);
  ReadingSet rs = derive_readings(prem, sc.goal, opts.limits);
  report.stats = rs.stats;
  for (auto& r : rs.readings) {
    report.meanings.push_back(r.meaning);
    report.readings.push_back(print_term(r.meaning));
    if (opts.trace) report.proofs.push_back(std::move(r.proof));
  }
  if (opts.oracle) {
    report.oracle_ran = true;
    ReadingSet os = oracle_enumerate(prem, sc.goal, opts.limits);
    std::set<std::string> mine, theirs;
    for (const auto& m : report.meanings) mine.insert(canonical_key(m));
    for (const auto& r : os.readings) {
      theirs.insert(canonical_key(r.meaning));
      if (!mine.count(canonical_key(r.meaning))) report.oracle_missing.push_back(print_term(r.meaning));
    }
    for (const auto& m : report.meanings)
      if (!theirs.count(canonical_key(m))) report.oracle_extra.push_back(print_term(m));
  }
  report.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline RunReport run(const std::string& scenario_path, const RunOptions& opts) {
  Scenario sc = load_scenario(scenario_file(scenario_path));
  return run_scenario(sc, lexicon_for(sc, opts), opts);
}

inline std::string report_text(const RunReport& r, bool count_only) {
  if (count_only) return std::to_string(r.count()) + "\n";
  std::ostringstream out;
  out << "scenario: " << r.scenario << "\n";
  out << "readings: " << r.count() << "\n";
  for (std::size_t i = 0; i < r.readings.size(); ++i) {
    out << "  " << i + 1 << ". " << r.readings[i] << "\n";
    if (i < r.proofs.size()) {
      std::istringstream lines(proof_to_text(r.proofs[i]));
      for (std::string line; std::getline(lines, line);) out << "       " << line << "\n";
    }
  }
  if (r.stats.limit_hit) out << "depth limit reached on some branch; results may be incomplete\n";
  if (r.oracle_ran) {
    if (r.oracle_agrees()) out << "oracle: agrees\n";
    for (const auto& m : r.oracle_missing) out << "oracle: only the oracle found " << m << "\n";
    for (const auto& m : r.oracle_extra) out << "oracle: only the prover found " << m << "\n";
  }
  out << "time: " << std::fixed;
  out.precision(2);
  out << r.millis << " ms\n";
  return out.str();
}

inline nlohmann::ordered_json report_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["scenario"] = r.scenario;
  j["count"] = r.count();
  j["readings"] = r.readings;
  j["limit_hit"] = r.stats.limit_hit;
  j["millis"] = r.millis;
  j["stats"] = {{"nodes", r.stats.nodes},
                {"proofs", r.stats.proofs},
                {"floundered", r.stats.floundered},
                {"ill_typed_attempts", r.stats.ill_typed_attempts}};
  if (!r.proofs.empty()) {
    nlohmann::ordered_json traces = nlohmann::ordered_json::array();
    for (const auto& p : r.proofs) traces.push_back(proof_to_json(p));
    j["traces"] = traces;
  }
  if (r.oracle_ran)
    j["oracle"] = {{"agrees", r.oracle_agrees()}, {"missing", r.oracle_missing}, {"extra", r.oracle_extra}};
  return j;
}

// --- golden-file batch ----------------------------------------------------

struct BatchEntry {
  std::string name;
  bool passed = false;
  std::string output;  // buffered per scenario
};

struct BatchSummary {
  std::vector<BatchEntry> entries;
  std::size_t passed() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.passed; }));
  }
  bool ok() const { return passed() == entries.size(); }
};

inline std::vector<TermPtr> parse_expected(const std::string& path, const Signature& sig) {
  std::vector<TermPtr> out;
  std::istringstream in(detail::read_file(path));
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    try {
      out.push_back(normalize(parse_term(line, sig)));
    } catch (const Error& e) {
      throw Error(e.kind(), path + ":" + std::to_string(lineno) + ": " + e.message());
    }
  }
  return out;
}

inline BatchEntry batch_one(const std::filesystem::path& dir, const RunOptions& opts) {
  BatchEntry entry{dir.filename().string(), false, {}};
  std::ostringstream out;
  try {
    Scenario sc = load_scenario((dir / "scenario").string());
    Lexicon lex = lexicon_for(sc, opts);
    Signature sig = lex.signature;
    for (const auto& [name, ty] : sc.extra_constants) sig[name] = ty;
    std::vector<TermPtr> expected = parse_expected((dir / "expected").string(), sig);
    RunReport r = run_scenario(sc, lex, opts);
    std::set<std::string> want, got;
    for (const auto& t : expected) want.insert(canonical_key(t));
    for (const auto& t : r.meanings) got.insert(canonical_key(t));
    entry.passed = want == got && (!r.oracle_ran || r.oracle_agrees());
    out << (entry.passed ? "PASS " : "FAIL ") << entry.name << " (" << r.count() << " readings)\n";
    for (const auto& t : expected)
      if (!got.count(canonical_key(t))) out << "  - missing:    " << print_term(t) << "\n";
    for (std::size_t i = 0; i < r.meanings.size(); ++i)
      if (!want.count(canonical_key(r.meanings[i]))) out << "  + unexpected: " << r.readings[i] << "\n";
    if (r.stats.limit_hit) out << "  depth limit reached on some branch\n";
    if (r.oracle_ran && !r.oracle_agrees()) out << "  oracle disagrees\n";
  } catch (const Error& e) {
    out << "FAIL " << entry.name << ": " << e.what() << "\n";
  }
  entry.output = out.str();
  return entry;
}

// Every subdirectory with a `scenario` file is one case; they run
// concurrently and report in name order.
inline BatchSummary batch(const std::string& corpus_dir, const RunOptions& opts) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(corpus_dir)) throw Error(ErrorKind::IoError, "not a directory: " + corpus_dir);
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(corpus_dir))
    if (e.is_directory() && fs::exists(e.path() / "scenario")) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  std::vector<std::future<BatchEntry>> jobs;
  for (const auto& d : dirs) jobs.push_back(std::async(std::launch::async, batch_one, d, opts));
  BatchSummary summary;
  for (auto& j : jobs) summary.entries.push_back(j.get());
  return summary;
}

}  // namespace glue
