#include <benchmark/benchmark.h>

#include <random>

#include "geobench/gazetteer.hpp"
#include "geobench/geoparser.hpp"
#include "geobench/metrics.hpp"
#include "support/fixtures.hpp"

using namespace geobench;

namespace {

const std::filesystem::path& synthetic_table(std::vector<std::string>* names) {
  static testing::TempDir dir("geobench-bench");
  static std::vector<std::string> sample;
  static const auto path = [] {
    const auto p = dir / "gazetteer.tsv";
    testing::write_synthetic_gazetteer(p, 200'000, 17, &sample);
    return p;
  }();
  if (names) *names = sample;
  return path;
}

void BM_GazetteerIngest(benchmark::State& state) {
  const auto& path = synthetic_table(nullptr);
  for (auto _ : state) {
    auto result = ingest_gazetteer(path);
    benchmark::DoNotOptimize(result.gazetteer.size());
  }
  state.SetItemsProcessed(state.iterations() * 200'000);
}
BENCHMARK(BM_GazetteerIngest)->Unit(benchmark::kMillisecond);

void BM_GazetteerLookup(benchmark::State& state) {
  std::vector<std::string> names;
  const auto& path = synthetic_table(&names);
  static const Gazetteer g = ingest_gazetteer(path).gazetteer;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.lookup(names[i++ % names.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GazetteerLookup);

void BM_AlignOverlap(benchmark::State& state) {
  std::mt19937 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  auto spans = [&] {
    std::vector<Span> s;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      pos += rng() % 6;
      s.push_back({pos, pos + 1 + rng() % 8});
    }
    std::sort(s.begin(), s.end(), [](const Span& a, const Span& b) {
      return std::tie(a.start, a.end) < std::tie(b.start, b.end);
    });
    s.erase(std::unique(s.begin(), s.end(),
                        [](const Span& a, const Span& b) { return a.start == b.start && a.end == b.end; }),
            s.end());
    return s;
  };
  const auto gold = spans(), pred = spans();
  for (auto _ : state) benchmark::DoNotOptimize(align(gold, pred, MatchMode::overlap));
}
BENCHMARK(BM_AlignOverlap)->Arg(16)->Arg(256)->Arg(4096);

void BM_BaselineParse(benchmark::State& state) {
  const Gazetteer g = testing::planted_gazetteer();
  const Corpus corpus = testing::planted_corpus();
  BaselineGeoparser parser(g);
  for (auto _ : state) {
    for (const Document& d : corpus.documents) benchmark::DoNotOptimize(parser.parse(d));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.documents.size()));
}
BENCHMARK(BM_BaselineParse);

}  // namespace

BENCHMARK_MAIN();
