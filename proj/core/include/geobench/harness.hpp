#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "geobench/cache.hpp"
#include "geobench/corpus.hpp"
#include "geobench/gazetteer.hpp"
#include "geobench/geoparser.hpp"
#include "geobench/leaderboard.hpp"
#include "geobench/metrics.hpp"

namespace geobench {

/// Fraction of failed documents above which a run is aborted.
inline constexpr double kDefaultFailureAbortFraction = 0.10;

struct EvaluateOptions {
  std::size_t workers = 1;
  const PredictionCache* cache = nullptr;
  double failure_abort_fraction = kDefaultFailureAbortFraction;
};

/// Creates one geoparser instance; called once per worker.
using GeoparserFactory = std::function<std::unique_ptr<Geoparser>()>;

/// Parses every document with per-worker geoparser instances. Results are
/// indexed like corpus.documents. Documents whose adapter failed come back
/// empty and are named in warnings; more than failure_abort_fraction failed
/// documents throws RunAborted.
std::vector<ParseOutput> predict_corpus(const GeoparserFactory& factory, const Corpus& corpus,
                                        std::size_t workers, double failure_abort_fraction,
                                        Warnings* warnings);

/// Aligns per document, pools counts and distances in document-id order and
/// computes the metrics.
EvalReport score_corpus(const Corpus& corpus, const std::vector<ParseOutput>& predictions,
                        const MetricsConfig& config, std::string geoparser_id,
                        Warnings warnings = {});

/// Full evaluation of one geoparser on one corpus, reading and filling the
/// prediction cache when one is given.
EvalReport evaluate(const GeoparserSpec& spec, const Corpus& corpus, const Gazetteer& gazetteer,
                    const MetricsConfig& config, const EvaluateOptions& options = {});

/// Same, for an arbitrary geoparser implementation. Not cached.
EvalReport evaluate(std::string geoparser_id, const GeoparserFactory& factory,
                    const Corpus& corpus, const MetricsConfig& config,
                    const EvaluateOptions& options = {});

struct CorpusSource {
  std::string name;
  std::filesystem::path path;
  std::optional<std::filesystem::path> manifest;
  Completeness completeness = Completeness::complete;
};

struct GazetteerSource {
  std::filesystem::path path;
  ColumnMap columns = ColumnMap::geonames();
  bool fold_diacritics = false;
};

struct RunConfig {
  std::vector<CorpusSource> corpora;
  GazetteerSource gazetteer;
  std::vector<GeoparserSpec> geoparsers;
  MetricsConfig metrics;
  std::optional<std::filesystem::path> cache_dir;
  std::size_t parallelism = 1;

  /// Throws UsageError.
  void validate() const;

  /// Relative paths resolve against base_dir. Throws UsageError/DataError.
  static RunConfig from_json(std::string_view json, const std::filesystem::path& base_dir);
  static RunConfig from_json_file(const std::filesystem::path& path);
};

struct RunSummary {
  std::vector<Leaderboard> leaderboards;  // in config corpus order
  std::vector<std::string> report_files;  // relative to the output directory
};

/// Runs every geoparser on every corpus and writes
///   <out>/run.json
///   <out>/<corpus>/<geoparser>.json
///   <out>/<corpus>/leaderboard.json
/// The files are byte-identical for identical inputs regardless of parallelism.
RunSummary run_benchmark(const RunConfig& config, const std::filesystem::path& out_dir);

/// Reads back the leaderboards written by run_benchmark.
std::vector<Leaderboard> load_run(const std::filesystem::path& run_dir);

}  // namespace geobench
