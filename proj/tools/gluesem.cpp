#include <iostream>

#include "CLI11.hpp"
#include "glue/report.hpp"

namespace {

constexpr int kNoReadings = 2;
constexpr int kError = 1;

int cmd_run(const std::string& path, const glue::RunOptions& opts, bool json, bool count_only) {
  glue::RunReport r = glue::run(path, opts);
  if (json) std::cout << glue::report_json(r).dump(2) << "\n";
  else std::cout << glue::report_text(r, count_only);
  if (r.oracle_ran && !r.oracle_agrees()) return kError;
  return r.count() > 0 ? 0 : kNoReadings;
}

int cmd_batch(const std::string& dir, const glue::RunOptions& opts) {
  glue::BatchSummary s = glue::batch(dir, opts);
  for (const auto& e : s.entries) std::cout << e.output;
  std::cout << s.entries.size() << " scenarios, " << s.passed() << " passed, " << s.entries.size() - s.passed()
            << " failed\n";
  return s.ok() ? 0 : kError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gluesem: derive readings by linear-logic deduction over glue premises"};
  app.require_subcommand(1);

  glue::RunOptions opts;
  std::string scenario, corpus;
  bool json = false, count_only = false;

  auto* run = app.add_subcommand("run", "derive the readings of one scenario");
  run->add_option("scenario", scenario, "scenario file, or a directory containing one")->required();
  run->add_option("--lexicon", opts.lexicon_path, "lexicon file; overrides the scenario's own");
  run->add_flag("--trace", opts.trace, "print the proof of each reading");
  run->add_flag("--json", json, "machine-readable report");
  run->add_flag("--count-only", count_only, "print only the number of readings");
  run->add_option("--max-depth", opts.limits.max_depth, "search depth bound")->capture_default_str();
  run->add_flag("--oracle", opts.oracle, "cross-check against exhaustive enumeration");

  auto* batch = app.add_subcommand("batch", "check every scenario in a corpus against its expected readings");
  batch->add_option("corpus", corpus, "directory of scenario directories")->required()->check(CLI::ExistingDirectory);
  batch->add_option("--lexicon", opts.lexicon_path, "lexicon file; overrides each scenario's own");
  batch->add_option("--max-depth", opts.limits.max_depth, "search depth bound")->capture_default_str();
  batch->add_flag("--oracle", opts.oracle, "also require agreement with exhaustive enumeration");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario, opts, json, count_only);
    return cmd_batch(corpus, opts);
  } catch (const glue::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kError;
}
