#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <random>

#include "geobench/cache.hpp"
#include "geobench/digest.hpp"
#include "geobench/errors.hpp"
#include "geobench/harness.hpp"
#include "geobench/leaderboard.hpp"
#include "support/fixtures.hpp"

using namespace geobench;
using geobench::testing::TempDir;

namespace {

/// Replays the gold annotation of each document.
class GoldReplay final : public Geoparser {
 public:
  ParseOutput parse(const Document& doc) override {
    ParseOutput out;
    for (const GoldToponym& g : doc.gold) out.toponyms.push_back({g.start, g.end, g.name, g.point, std::nullopt});
    return out;
  }
};

class Silent final : public Geoparser {
 public:
  ParseOutput parse(const Document&) override { return {}; }
};

/// Fails on every document whose id is listed.
class Flaky final : public Geoparser {
 public:
  explicit Flaky(std::vector<std::string> failing) : failing_(std::move(failing)) {}
  ParseOutput parse(const Document& doc) override {
    if (std::find(failing_.begin(), failing_.end(), doc.id) != failing_.end()) throw AdapterTimeout("slow");
    return GoldReplay().parse(doc);
  }

 private:
  std::vector<std::string> failing_;
};

LeaderboardRow row(std::string id, std::optional<double> f, std::optional<double> acc,
                   Completeness c = Completeness::complete) {
  EvalReport r;
  r.geoparser = id;
  r.corpus = "fixture";
  r.completeness = c;
  if (c == Completeness::complete) {
    r.precision = f;
    r.recall = f;
    r.f_score = f;
  }
  r.accuracy = acc;
  return {std::move(id), std::move(r)};
}

std::vector<std::string> order(const Leaderboard& b) {
  std::vector<std::string> ids;
  for (const auto& r : b.rows) ids.push_back(r.geoparser);
  return ids;
}

template <typename T>
GeoparserFactory factory_of() {
  return [] { return std::make_unique<T>(); };
}

}  // namespace

TEST_CASE("gold replay scores perfectly") {
  const Corpus corpus = testing::planted_corpus();
  const EvalReport r = evaluate("oracle", factory_of<GoldReplay>(), corpus, {});
  CHECK(*r.precision == 1.0);
  CHECK(*r.recall == 1.0);
  CHECK(*r.f_score == 1.0);
  CHECK(*r.accuracy == 1.0);
  CHECK(*r.mean_km == 0.0);
  CHECK(*r.median_km == 0.0);
  CHECK(*r.acc_at_161 == 1.0);
  CHECK(*r.auc == 0.0);
  CHECK(r.warnings.empty());
}

TEST_CASE("silent geoparser scores zero and warns") {
  const Corpus corpus = testing::planted_corpus();
  const EvalReport r = evaluate("silent", factory_of<Silent>(), corpus, {});
  CHECK(*r.precision == 0.0);
  CHECK(*r.recall == 0.0);
  CHECK(*r.f_score == 0.0);
  CHECK_FALSE(r.mean_km);
  CHECK_FALSE(r.auc);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("builtin baseline on the planted corpus") {
  const Corpus corpus = testing::planted_corpus();
  const Gazetteer gaz = testing::planted_gazetteer();
  GeoparserSpec spec{GeoparserKind::builtin_baseline, "baseline", RecognizerConfig{}};
  for (std::size_t workers : {1u, 4u}) {
    const EvalReport r = evaluate(spec, corpus, gaz, {}, {workers});
    CHECK(*r.f_score == 1.0);
    CHECK(*r.mean_km == 0.0);
    CHECK(*r.median_km == 0.0);
    CHECK(*r.acc_at_161 == 1.0);
    CHECK(*r.auc == 0.0);
  }
  const Corpus lower = degrade_case(corpus);
  CHECK(*evaluate(spec, lower, gaz, {}).recall == 0.0);
  std::get<RecognizerConfig>(spec.parameters).require_capitalized = false;
  CHECK(*evaluate(spec, lower, gaz, {}).recall == 1.0);
}

TEST_CASE("adapter failures: warnings below the threshold, abort above") {
  const Corpus corpus = testing::planted_corpus();  // 20 documents
  Warnings w;
  const auto two = [] { return std::make_unique<Flaky>(std::vector<std::string>{"doc-03", "doc-11"}); };
  const auto preds = predict_corpus(two, corpus, 3, kDefaultFailureAbortFraction, &w);
  REQUIRE(preds.size() == 20);
  CHECK(preds[3].toponyms.empty());
  CHECK_FALSE(preds[4].toponyms.empty());
  REQUIRE(w.size() == 2);
  CHECK(w[0].find("doc-03") != std::string::npos);
  CHECK(w[1].find("doc-11") != std::string::npos);

  const auto three = [] {
    return std::make_unique<Flaky>(std::vector<std::string>{"doc-00", "doc-05", "doc-19"});
  };
  CHECK_THROWS_AS(predict_corpus(three, corpus, 2, kDefaultFailureAbortFraction, nullptr), RunAborted);
}

TEST_CASE("external process geoparser through the harness") {
  const Corpus corpus = testing::planted_corpus();
  const Gazetteer gaz = testing::planted_gazetteer();
  ProcessAdapterParams p;
  p.command = {GEOBENCH_FAKE_ADAPTER, "fail-prefix", "doc-1"};
  p.timeout = std::chrono::seconds(10);
  GeoparserSpec spec{GeoparserKind::external_process, "flaky", p};
  // doc-10..doc-19 fail: half the corpus.
  CHECK_THROWS_AS(evaluate(spec, corpus, gaz, {}, {4}), RunAborted);

  std::get<ProcessAdapterParams>(spec.parameters).command = {GEOBENCH_FAKE_ADAPTER, "fail-prefix", "doc-07"};
  const EvalReport r = evaluate(spec, corpus, gaz, {}, {4});
  CHECK(*r.recall == 0.0);
  CHECK(r.counts.predicted == 0);
  CHECK(std::any_of(r.warnings.begin(), r.warnings.end(),
                    [](const std::string& s) { return s.find("doc-07") != std::string::npos; }));
}

TEST_CASE("leaderboard ordering") {
  SUBCASE("f_score for complete corpora") {
    const Leaderboard b = compare({row("b", 0.5, 0.5), row("c", 0.9, 0.1), row("a", 0.5, 0.9)},
                                  Completeness::complete);
    CHECK(b.ordering_key == OrderingKey::f_score);
    CHECK(order(b) == std::vector<std::string>{"c", "a", "b"});
  }
  SUBCASE("accuracy for partial corpora") {
    const Leaderboard b = compare({row("b", {}, 0.2, Completeness::partial), row("a", {}, 0.7, Completeness::partial),
                                   row("c", {}, 0.2, Completeness::partial)},
                                  Completeness::partial);
    CHECK(b.ordering_key == OrderingKey::accuracy);
    CHECK(order(b) == std::vector<std::string>{"a", "b", "c"});
  }
  SUBCASE("mixed corpora are rejected") {
    auto other = row("x", 0.1, 0.1);
    other.report.corpus = "elsewhere";
    CHECK_THROWS_AS(compare({row("a", 0.5, 0.5), other}, Completeness::complete), DataError);
  }
  SUBCASE("order does not depend on input order") {
    std::vector<LeaderboardRow> rows;
    for (int i = 0; i < 12; ++i) rows.push_back(row("g" + std::to_string(i), (i % 4) / 4.0, 0.0));
    const auto expected = order(compare(rows, Completeness::complete));
    std::mt19937 rng(1);
    for (int t = 0; t < 20; ++t) {
      std::shuffle(rows.begin(), rows.end(), rng);
      CHECK(order(compare(rows, Completeness::complete)) == expected);
    }
  }
}

TEST_CASE("render_report") {
  const Leaderboard one = compare({row("DM_NLP+Pop", 0.917, 0.85)}, Completeness::complete);
  const std::string text = render_report(one, ReportFormat::text);
  CHECK(text.find("DM_NLP+Pop") != std::string::npos);
  CHECK(text.find("0.917") != std::string::npos);
  CHECK(text.find("f_score") != std::string::npos);

  const std::string csv = render_report(one, ReportFormat::csv);
  const auto newline = csv.find('\n');
  CHECK(csv.substr(0, newline) == "geoparser,precision,recall,f_score,accuracy,mean (km),median (km),AUC,acc@161");
  CHECK(csv.substr(newline + 1) == "DM_NLP+Pop,0.917,0.917,0.917,0.850,,,,\n");

  const auto j = nlohmann::json::parse(render_report(one, ReportFormat::json));
  REQUIRE(j.is_array());
  CHECK(j[0]["f_score"].get<double>() == 0.917);
  CHECK(j[0]["mean"].is_null());

  const Leaderboard partial = compare({row("GeoTxt", {}, 0.463, Completeness::partial)}, Completeness::partial);
  const std::string ptext = render_report(partial, ReportFormat::text);
  CHECK(ptext.find("f_score") == std::string::npos);
  CHECK(ptext.find("precision") == std::string::npos);
  CHECK(ptext.find("0.463") != std::string::npos);
  CHECK(parse_report_format("csv") == ReportFormat::csv);
  CHECK_THROWS_AS(parse_report_format("xml"), UsageError);
}

TEST_CASE("prediction cache") {
  TempDir dir;
  const PredictionCache cache(dir.path() / "cache");
  const Corpus corpus = testing::planted_corpus();
  std::vector<ParseOutput> preds(corpus.documents.size());
  GoldReplay replay;
  for (std::size_t i = 0; i < preds.size(); ++i) preds[i] = replay.parse(corpus.documents[i]);
  const CacheKey key{"oracle", corpus.name, corpus_digest(corpus), "params"};

  CHECK_FALSE(cache.load(key, corpus));
  cache.store(key, corpus, preds);
  const auto back = cache.load(key, corpus);
  REQUIRE(back);
  REQUIRE(back->size() == preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) CHECK((*back)[i].toponyms == preds[i].toponyms);

  SUBCASE("a changed corpus misses") {
    Corpus edited = corpus;
    edited.documents[0].text[0] = 'd';
    CHECK(corpus_digest(edited) != key.corpus_digest);
    CacheKey k2 = key;
    k2.corpus_digest = corpus_digest(edited);
    CHECK_FALSE(cache.load(k2, edited));
  }
  SUBCASE("a corrupt entry misses with a warning") {
    std::string content = testing::read_text(cache.entry_path(key));
    content.resize(content.size() / 2);
    testing::write_text(cache.entry_path(key), content);
    Warnings w;
    CHECK_FALSE(cache.load(key, corpus, &w));
    CHECK_FALSE(w.empty());
  }
}

TEST_CASE("evaluate reuses cached predictions") {
  TempDir dir;
  const PredictionCache cache(dir.path());
  const Corpus corpus = testing::planted_corpus();
  const Gazetteer gaz = testing::planted_gazetteer();
  GeoparserSpec spec{GeoparserKind::builtin_baseline, "baseline", RecognizerConfig{}};
  const EvalReport first = evaluate(spec, corpus, gaz, {}, {1, &cache});
  const auto entries = [&] { return std::distance(std::filesystem::directory_iterator(dir / "baseline"), {}); };
  CHECK(entries() == 1);
  CHECK(evaluate(spec, corpus, gaz, {}, {2, &cache}) == first);

  // Different parameters do not share the entry.
  std::get<RecognizerConfig>(spec.parameters).max_ngram = 2;
  evaluate(spec, corpus, gaz, {}, {1, &cache});
  CHECK(entries() == 2);
}

TEST_CASE("run config parsing") {
  TempDir dir;
  const auto path = testing::write_planted_workspace(dir.path());
  const RunConfig c = RunConfig::from_json_file(path);
  REQUIRE(c.corpora.size() == 2);
  CHECK(c.corpora[0].name == "planted");
  CHECK(c.corpora[1].completeness == Completeness::partial);
  CHECK(c.gazetteer.path == dir.path() / "gazetteer.tsv");
  REQUIRE(c.geoparsers.size() == 2);
  CHECK_FALSE(std::get<RecognizerConfig>(c.geoparsers[1].parameters).require_capitalized);

  const std::string base = R"({"gazetteer": {"path": "g"}, "corpora": [{"path": "c.jsonl", "completeness": "complete"}], )";
  CHECK_THROWS_AS(RunConfig::from_json("{", dir.path()), UsageError);
  CHECK_THROWS_AS(RunConfig::from_json(base + R"("geoparsers": []})", dir.path()), UsageError);
  CHECK_THROWS_AS(RunConfig::from_json(base + R"("geoparsers": [{"kind": "magic", "id": "m"}]})", dir.path()),
                  UsageError);
  CHECK_THROWS_AS(
      RunConfig::from_json(base + R"("geoparsers": [{"kind": "builtin-baseline", "id": "a"},
                                                     {"kind": "builtin-baseline", "id": "a"}]})",
                           dir.path()),
      UsageError);
  const RunConfig p = RunConfig::from_json(
      base + R"("geoparsers": [{"kind": "external-process", "id": "ext", "parameters": {"command": "tool --x", "timeout_s": 2}}],
                "metrics": {"match_mode": "overlap", "threshold_km": 100}, "parallelism": 3})",
      dir.path());
  const auto& pp = std::get<ProcessAdapterParams>(p.geoparsers[0].parameters);
  CHECK(pp.command == std::vector<std::string>{"tool", "--x"});
  CHECK(pp.timeout == std::chrono::seconds(2));
  CHECK(p.metrics.match_mode == MatchMode::overlap);
  CHECK(p.metrics.threshold_km == 100.0);
  CHECK(p.parallelism == 3);
}

TEST_CASE("run_benchmark writes deterministic reports") {
  TempDir dir;
  const auto path = testing::write_planted_workspace(dir.path());
  RunConfig c = RunConfig::from_json_file(path);
  c.parallelism = 1;
  const RunSummary s1 = run_benchmark(c, dir.path() / "out1");
  c.parallelism = 8;
  c.cache_dir = dir.path() / "cache";
  run_benchmark(c, dir.path() / "out8");
  run_benchmark(c, dir.path() / "out8-cached");

  REQUIRE(s1.leaderboards.size() == 2);
  CHECK(order(s1.leaderboards[0]) == std::vector<std::string>{"baseline", "baseline-nocaps"});
  CHECK(*s1.leaderboards[0].rows[0].report.f_score == 1.0);
  CHECK(order(s1.leaderboards[1]) == std::vector<std::string>{"baseline-nocaps", "baseline"});
  CHECK(*s1.leaderboards[1].rows[1].report.accuracy == 0.0);

  std::vector<std::string> files = s1.report_files;
  files.insert(files.end(), {"run.json", "planted/leaderboard.json", "planted-lower/leaderboard.json"});
  for (const std::string& rel : files) {
    const std::string a = testing::read_text(dir.path() / "out1" / rel);
    CHECK(!a.empty());
    CHECK(a == testing::read_text(dir.path() / "out8" / rel));
    CHECK(a == testing::read_text(dir.path() / "out8-cached" / rel));
  }

  const auto loaded = load_run(dir.path() / "out1");
  REQUIRE(loaded.size() == 2);
  CHECK(order(loaded[1]) == order(s1.leaderboards[1]));
  CHECK(loaded[0].rows[0].report == s1.leaderboards[0].rows[0].report);
}
