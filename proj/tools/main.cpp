// geobench: corpus/gazetteer utilities and the benchmark runner.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 adapter error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "geobench/corpus.hpp"
#include "geobench/errors.hpp"
#include "geobench/gazetteer.hpp"
#include "geobench/harness.hpp"
#include "geobench/leaderboard.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kAdapter = 3 };

using namespace geobench;

int cmd_ingest(const std::string& corpus_path, const std::string& manifest_path,
               const std::string& completeness, const std::string& lowercase_out) {
  Corpus corpus = manifest_path.empty()
                      ? load_corpus(corpus_path, parse_completeness(completeness))
                      : load_corpus(corpus_path, manifest_path);
  const ValidationReport violations = validate_corpus(corpus);
  const CorpusStats stats = corpus_stats(corpus);

  nlohmann::json out = {
      {"name", corpus.name},
      {"completeness", std::string(to_string(corpus.completeness))},
      {"document_count", stats.document_count},
      {"toponym_count", stats.toponym_count},
      {"mean_tokens_per_document", stats.mean_tokens_per_document},
      {"toponyms_with_coordinates", stats.toponyms_with_coordinates},
      {"violations", violations.size()},
  };
  std::cout << out.dump(2) << '\n';
  for (const Violation& v : violations) std::cerr << v.document_id << ": " << v.message << '\n';

  if (!lowercase_out.empty()) {
    std::filesystem::path manifest = lowercase_out;
    manifest.replace_extension(".manifest.json");
    Corpus degraded = degrade_case(corpus);
    degraded.name = corpus.name + "-lowercase";
    save_corpus(degraded, lowercase_out, manifest);
    std::cerr << "wrote " << lowercase_out << " and " << manifest.string() << '\n';
  }
  return violations.empty() ? kOk : kData;
}

int cmd_gazetteer(const std::string& input, const std::string& schema, const std::string& out_index,
                  bool fold_diacritics) {
  IngestOptions options;
  options.fold_diacritics = fold_diacritics;
  if (schema != "geonames") options.columns = ColumnMap::from_json_file(schema);

  const auto t0 = std::chrono::steady_clock::now();
  const IngestResult result = ingest_gazetteer(input, options);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  nlohmann::json skipped = nlohmann::json::object();
  for (const auto& [reason, count] : result.diagnostics.skip_reasons) skipped[reason] = count;
  nlohmann::json out = {
      {"entries", result.gazetteer.size()},
      {"names", result.gazetteer.name_count()},
      {"rows_read", result.diagnostics.rows_read},
      {"rows_skipped", result.diagnostics.rows_skipped},
      {"skip_reasons", std::move(skipped)},
      {"fold_diacritics", fold_diacritics},
      {"digest", result.gazetteer.digest()},
  };
  std::cout << out.dump(2) << '\n';
  std::cerr << "ingested in " << seconds << " s\n";

  if (!out_index.empty()) {
    std::ofstream os(out_index, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot write " + out_index);
    for (const auto& [name, ids] : result.gazetteer.index_listing()) {
      os << name << '\t';
      for (std::size_t i = 0; i < ids.size(); ++i) os << (i ? "," : "") << ids[i];
      os << '\n';
    }
  }
  return kOk;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, std::size_t workers,
            const std::string& match_mode, bool no_cache) {
  RunConfig config = RunConfig::from_json_file(config_path);
  if (workers > 0) config.parallelism = workers;
  if (!match_mode.empty()) config.metrics.match_mode = parse_match_mode(match_mode);
  if (no_cache) config.cache_dir.reset();

  const auto t0 = std::chrono::steady_clock::now();
  const RunSummary summary = run_benchmark(config, out_dir);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  for (const Leaderboard& board : summary.leaderboards) {
    std::cout << board.corpus << " (" << to_string(board.completeness) << ", ordered by "
              << to_string(board.ordering_key) << ")\n"
              << render_report(board, ReportFormat::text) << '\n';
  }
  std::cerr << "wrote " << summary.report_files.size() << " report(s) to " << out_dir << " in "
            << seconds << " s\n";
  return kOk;
}

int cmd_report(const std::string& run_dir, const std::string& format_name, const std::string& corpus) {
  const ReportFormat format = parse_report_format(format_name);
  bool found = false;
  for (const Leaderboard& board : load_run(run_dir)) {
    if (!corpus.empty() && board.corpus != corpus) continue;
    found = true;
    if (format == ReportFormat::text) {
      std::cout << board.corpus << " (" << to_string(board.completeness) << ", ordered by "
                << to_string(board.ordering_key) << ")\n";
    }
    std::cout << render_report(board, format);
    if (format == ReportFormat::text) std::cout << '\n';
  }
  if (!corpus.empty() && !found) throw UsageError("no corpus \"" + corpus + "\" in " + run_dir);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geoparser benchmarking: corpora, gazetteers, runs and leaderboards"};
  app.require_subcommand(1);

  std::string corpus_path, manifest_path, completeness = "complete", lowercase_out;
  auto* ingest = app.add_subcommand("ingest", "Validate and summarize a corpus");
  ingest->add_option("--corpus", corpus_path, "Corpus file (JSON lines)")->required();
  ingest->add_option("--manifest", manifest_path, "Corpus manifest (JSON)");
  ingest->add_option("--completeness", completeness, "complete|partial when no manifest is given")
      ->check(CLI::IsMember({"complete", "partial"}));
  ingest->add_option("--lowercase-out", lowercase_out, "Also write a lowercased variant here");

  std::string gaz_input, schema = "geonames", out_index;
  bool fold_diacritics = false;
  auto* gazetteer = app.add_subcommand("gazetteer", "Ingest a gazetteer and report diagnostics");
  gazetteer->add_option("--input", gaz_input, "Tab-separated place table")->required();
  gazetteer->add_option("--schema", schema, "\"geonames\" or a JSON column-map file");
  gazetteer->add_option("--out-index", out_index, "Write the name index (name<TAB>ids)");
  gazetteer->add_flag("--fold-diacritics", fold_diacritics, "Strip diacritics when normalizing");

  std::string config_path, out_dir, match_mode;
  std::size_t workers = 0;
  bool no_cache = false;
  auto* run = app.add_subcommand("run", "Evaluate every geoparser on every corpus");
  run->add_option("--config", config_path, "Run configuration (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--workers", workers, "Worker count (overrides config parallelism)")
      ->check(CLI::PositiveNumber);
  run->add_option("--match-mode", match_mode, "exact|overlap")->check(CLI::IsMember({"exact", "overlap"}));
  run->add_flag("--no-cache", no_cache, "Ignore and do not fill the prediction cache");

  std::string run_dir, format = "text", corpus_name;
  auto* report = app.add_subcommand("report", "Render the leaderboards of a finished run");
  report->add_option("--run-dir", run_dir, "Directory written by `run`")->required();
  report->add_option("--format", format, "text|csv|json")->check(CLI::IsMember({"text", "csv", "json"}));

  auto* compare = app.add_subcommand("compare", "Render one corpus' leaderboard");
  compare->add_option("--run-dir", run_dir, "Directory written by `run`")->required();
  compare->add_option("--corpus", corpus_name, "Corpus name")->required();
  compare->add_option("--format", format, "text|csv|json")->check(CLI::IsMember({"text", "csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*ingest) return cmd_ingest(corpus_path, manifest_path, completeness, lowercase_out);
    if (*gazetteer) return cmd_gazetteer(gaz_input, schema, out_index, fold_diacritics);
    if (*run) return cmd_run(config_path, out_dir, workers, match_mode, no_cache);
    if (*report) return cmd_report(run_dir, format, {});
    if (*compare) return cmd_report(run_dir, format, corpus_name);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const AdapterError& e) {
    std::cerr << "adapter error: " << e.what() << '\n';
    if (const auto* pe = dynamic_cast<const AdapterProtocolError*>(&e); pe && !pe->raw_payload().empty())
      std::cerr << "raw payload: " << pe->raw_payload() << '\n';
    return kAdapter;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
