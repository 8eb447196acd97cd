#include "geobench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "geobench/digest.hpp"
#include "geobench/errors.hpp"
#include "geobench/unicode.hpp"

namespace geobench {

namespace {

// Applies the prediction contract to output of any geoparser: spans inside
// the text, names equal to the slice, valid points, sorted unique spans.
void sanitize(ParseOutput& out, const Document& doc, const std::u32string& text) {
  std::vector<PredictedToponym> kept;
  kept.reserve(out.toponyms.size());
  for (PredictedToponym& p : out.toponyms) {
    std::string reason;
    if (p.start >= p.end || p.end > text.size()) {
      reason = "span (" + std::to_string(p.start) + ", " + std::to_string(p.end) + ") outside text";
    } else if (unicode::slice(text, p.start, p.end) != p.name) {
      reason = "name \"" + p.name + "\" does not match text";
    } else if (p.point && !p.point->valid()) {
      reason = "coordinates out of range";
    }
    if (!reason.empty()) {
      ++out.dropped;
      out.drop_reasons.push_back(doc.id + ": " + reason);
      continue;
    }
    kept.push_back(std::move(p));
  }
  std::stable_sort(kept.begin(), kept.end(), [](const PredictedToponym& a, const PredictedToponym& b) {
    return std::tie(a.start, a.end) < std::tie(b.start, b.end);
  });
  out.toponyms.clear();
  for (PredictedToponym& p : kept) {
    if (!out.toponyms.empty() && out.toponyms.back().start == p.start &&
        out.toponyms.back().end == p.end) {
      ++out.dropped;
      out.drop_reasons.push_back(doc.id + ": duplicate span");
      continue;
    }
    out.toponyms.push_back(std::move(p));
  }
}

std::vector<std::size_t> order_by_id(const Corpus& corpus) {
  std::vector<std::size_t> order(corpus.documents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus.documents[a].id < corpus.documents[b].id;
  });
  return order;
}

std::string safe_name(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.' || c == '+';
    out.push_back(ok ? c : '_');
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw DataError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

std::vector<ParseOutput> predict_corpus(const GeoparserFactory& factory, const Corpus& corpus,
                                        std::size_t workers, double failure_abort_fraction,
                                        Warnings* warnings) {
  const std::size_t n = corpus.documents.size();
  std::vector<ParseOutput> results(n);
  std::vector<std::string> failures(n);
  std::vector<char> failed(n, 0);

  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> failed_count{0};
  std::atomic<bool> stop{false};
  const auto limit = static_cast<std::size_t>(failure_abort_fraction * static_cast<double>(n));
  std::vector<std::exception_ptr> errors(workers);

  auto work = [&](std::size_t worker) {
    try {
      std::unique_ptr<Geoparser> geoparser = factory();
      while (!stop.load(std::memory_order_relaxed)) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        const Document& doc = corpus.documents[i];
        try {
          results[i] = geoparser->parse(doc);
          sanitize(results[i], doc, unicode::decode(doc.text));
        } catch (const AdapterError& e) {
          failed[i] = 1;
          failures[i] = e.what();
          if (const auto* pe = dynamic_cast<const AdapterProtocolError*>(&e); pe && !pe->raw_payload().empty()) {
            failures[i] += " (raw payload: " + pe->raw_payload().substr(0, 200) + ")";
          }
          // Past the abort threshold there is nothing left to learn.
          if (failed_count.fetch_add(1) + 1 > limit) stop = true;
        }
      }
    } catch (...) {
      errors[worker] = std::current_exception();
      stop = true;
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::size_t failures_total = 0;
  std::string first_failure;
  for (std::size_t i : order_by_id(corpus)) {
    if (!failed[i]) continue;
    if (failures_total++ == 0) first_failure = corpus.documents[i].id + ": " + failures[i];
  }
  if (failures_total > limit) {
    throw RunAborted("adapter failed on more than " +
                     std::to_string(static_cast<int>(failure_abort_fraction * 100.0 + 0.5)) +
                     "% of documents in corpus \"" + corpus.name + "\" (first failure: " +
                     first_failure + ")");
  }
  if (warnings) {
    for (std::size_t i : order_by_id(corpus)) {
      if (failed[i]) {
        warnings->push_back("document " + corpus.documents[i].id +
                            " scored as zero predictions: " + failures[i]);
      }
    }
  }
  return results;
}

EvalReport score_corpus(const Corpus& corpus, const std::vector<ParseOutput>& predictions,
                        const MetricsConfig& config, std::string geoparser_id, Warnings warnings) {
  config.validate();
  if (predictions.size() != corpus.documents.size())
    throw std::invalid_argument("prediction count does not match corpus size");

  EvalCounts counts;
  std::vector<double> distances;
  std::size_t gold_without_point = 0;
  std::size_t dropped = 0;
  std::vector<std::string> drop_examples;

  for (std::size_t i : order_by_id(corpus)) {
    const Document& doc = corpus.documents[i];
    const ParseOutput& out = predictions[i];
    const Matching m = align(std::span<const GoldToponym>(doc.gold),
                             std::span<const PredictedToponym>(out.toponyms), config.match_mode);
    counts.gold += doc.gold.size();
    counts.predicted += out.toponyms.size();
    counts.matched += m.pairs.size();

    DistanceErrors d = distance_errors(m, doc.gold, out.toponyms, config.earth_radius_km);
    counts.resolved += d.resolved;
    counts.unresolved_matched += d.unresolved_matched;
    gold_without_point += d.gold_without_point;
    distances.insert(distances.end(), d.km.begin(), d.km.end());

    dropped += out.dropped;
    for (const std::string& r : out.drop_reasons) {
      if (drop_examples.size() < 5) drop_examples.push_back(r);
    }
  }

  if (dropped > 0) {
    std::string msg = std::to_string(dropped) + " invalid prediction(s) dropped";
    for (const std::string& r : drop_examples) msg += "; " + r;
    warnings.push_back(std::move(msg));
  }
  if (gold_without_point > 0) {
    warnings.push_back(std::to_string(gold_without_point) +
                       " matched toponym(s) without gold coordinates skipped in distance metrics");
  }

  EvalReport report = summarize(counts, distances, corpus.completeness, config, std::move(warnings));
  report.geoparser = std::move(geoparser_id);
  report.corpus = corpus.name;
  return report;
}

EvalReport evaluate(std::string geoparser_id, const GeoparserFactory& factory, const Corpus& corpus,
                    const MetricsConfig& config, const EvaluateOptions& options) {
  Warnings warnings;
  auto predictions =
      predict_corpus(factory, corpus, options.workers, options.failure_abort_fraction, &warnings);
  return score_corpus(corpus, predictions, config, std::move(geoparser_id), std::move(warnings));
}

EvalReport evaluate(const GeoparserSpec& spec, const Corpus& corpus, const Gazetteer& gazetteer,
                    const MetricsConfig& config, const EvaluateOptions& options) {
  config.validate();
  Warnings warnings;

  std::optional<CacheKey> key;
  std::optional<std::vector<ParseOutput>> predictions;
  if (options.cache) {
    std::string configuration = spec.canonical_parameters();
    if (spec.kind == GeoparserKind::builtin_baseline) configuration += "gazetteer=" + gazetteer.digest();
    key = CacheKey{spec.identifier, corpus.name, corpus_digest(corpus), sha256_hex(configuration)};
    predictions = options.cache->load(*key, corpus, &warnings);
  }

  if (!predictions) {
    std::size_t workers = options.workers;
    if (const auto* hp = std::get_if<HttpAdapterParams>(&spec.parameters)) {
      workers = std::min(workers, std::max<std::size_t>(hp->max_connections, 1));
    }
    const GeoparserFactory factory = [&] { return make_geoparser(spec, gazetteer); };
    const std::size_t before = warnings.size();
    predictions = predict_corpus(factory, corpus, workers, options.failure_abort_fraction, &warnings);
    // Only complete, failure-free predictions are worth caching.
    if (options.cache && warnings.size() == before) options.cache->store(*key, corpus, *predictions);
  }
  return score_corpus(corpus, *predictions, config, spec.identifier, std::move(warnings));
}

RunSummary run_benchmark(const RunConfig& config, const std::filesystem::path& out_dir) {
  config.validate();

  IngestOptions ingest{config.gazetteer.columns, config.gazetteer.fold_diacritics};
  const IngestResult gaz = ingest_gazetteer(config.gazetteer.path, ingest);

  std::optional<PredictionCache> cache;
  if (config.cache_dir) cache.emplace(*config.cache_dir);

  EvaluateOptions options;
  options.workers = config.parallelism;
  options.cache = cache ? &*cache : nullptr;

  std::filesystem::create_directories(out_dir);
  RunSummary summary;
  nlohmann::json corpora = nlohmann::json::array();

  for (const CorpusSource& source : config.corpora) {
    Corpus corpus = source.manifest ? load_corpus(source.path, *source.manifest)
                                    : load_corpus(source.path, source.completeness, source.name);
    corpus.name = source.name;

    const std::string dir_name = safe_name(source.name);
    const auto dir = out_dir / dir_name;
    std::filesystem::create_directories(dir);

    std::vector<LeaderboardRow> rows;
    nlohmann::json files = nlohmann::json::array();
    for (const GeoparserSpec& spec : config.geoparsers) {
      EvalReport report = evaluate(spec, corpus, gaz.gazetteer, config.metrics, options);
      const std::string file = safe_name(spec.identifier) + ".json";
      write_file(dir / file, to_json(report) + "\n");
      summary.report_files.push_back((std::filesystem::path(dir_name) / file).string());
      files.push_back(file);
      rows.push_back({spec.identifier, std::move(report)});
    }

    Leaderboard board = compare(std::move(rows), corpus.completeness);
    write_file(dir / "leaderboard.json", render_report(board, ReportFormat::json));
    corpora.push_back({{"name", source.name},
                       {"completeness", std::string(to_string(corpus.completeness))},
                       {"directory", dir_name},
                       {"reports", std::move(files)},
                       {"ordering_key", std::string(to_string(board.ordering_key))}});
    summary.leaderboards.push_back(std::move(board));
  }

  nlohmann::json run = {
      {"corpora", std::move(corpora)},
      {"gazetteer",
       {{"entries", gaz.gazetteer.size()},
        {"rows_read", gaz.diagnostics.rows_read},
        {"rows_skipped", gaz.diagnostics.rows_skipped},
        {"fold_diacritics", gaz.gazetteer.folds_diacritics()}}},
      {"aggregation", std::string(kAggregation)},
      {"auc_formula", std::string(kAucFormula)},
      {"match_mode", std::string(to_string(config.metrics.match_mode))},
  };
  write_file(out_dir / "run.json", run.dump(2) + "\n");
  return summary;
}

std::vector<Leaderboard> load_run(const std::filesystem::path& run_dir) {
  nlohmann::json run;
  try {
    run = nlohmann::json::parse(read_file(run_dir / "run.json"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed run.json in " + run_dir.string() + ": " + e.what());
  }
  std::vector<Leaderboard> boards;
  try {
    for (const auto& c : run.at("corpora")) {
      const auto dir = run_dir / c.at("directory").get<std::string>();
      std::vector<LeaderboardRow> rows;
      for (const auto& f : c.at("reports")) {
        EvalReport report = eval_report_from_json(read_file(dir / f.get<std::string>()));
        std::string id = report.geoparser;
        rows.push_back({std::move(id), std::move(report)});
      }
      Leaderboard board = compare(std::move(rows), parse_completeness(c.at("completeness").get<std::string>()));
      board.corpus = c.at("name").get<std::string>();
      boards.push_back(std::move(board));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed run.json in " + run_dir.string() + ": " + e.what());
  }
  return boards;
}

}  // namespace geobench
