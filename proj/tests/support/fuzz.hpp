#pragma once

// Random scoring instances and their brute-force expected metrics.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "geobench/corpus.hpp"
#include "geobench/geoparser.hpp"
#include "geobench/metrics.hpp"
#include "support/reference.hpp"

namespace geobench::testing {

struct FuzzInstance {
  Corpus corpus;
  std::vector<ParseOutput> predictions;
};

inline std::vector<reference::RefSpan> random_spans(std::mt19937& rng, std::size_t text_len,
                                                    std::size_t max_count) {
  std::set<std::pair<std::size_t, std::size_t>> uniq;
  const std::size_t n = rng() % (max_count + 1);
  while (uniq.size() < n) {
    const std::size_t start = rng() % (text_len - 1);
    const std::size_t len = 1 + rng() % std::min<std::size_t>(8, text_len - start);
    uniq.emplace(start, start + len);
  }
  std::vector<reference::RefSpan> out;
  for (auto [s, e] : uniq) out.push_back({s, e});
  return out;
}

inline GeoPoint random_point(std::mt19937& rng) {
  std::uniform_real_distribution<double> lat(-90.0, 90.0), lon(-180.0, 180.0);
  // Sometimes stay close to the previous scale so small errors show up too.
  return {lat(rng), lon(rng)};
}

/// A corpus of 1-3 documents with up to max_spans gold and predicted spans
/// each. Gold always carries a point; predictions do four times in five.
inline FuzzInstance random_instance(std::mt19937& rng, Completeness completeness,
                                    std::size_t max_spans = 12) {
  FuzzInstance inst;
  inst.corpus.name = "fuzz";
  inst.corpus.completeness = completeness;
  const std::size_t docs = 1 + rng() % 3;
  for (std::size_t d = 0; d < docs; ++d) {
    Document doc;
    doc.id = "f" + std::to_string(d);
    const std::size_t len = 20 + rng() % 60;
    for (std::size_t i = 0; i < len; ++i) doc.text += static_cast<char>('a' + rng() % 26);
    ParseOutput out;
    for (const auto& s : random_spans(rng, len, max_spans)) {
      const GeoPoint p = random_point(rng);
      doc.gold.push_back({s.start, s.end, doc.text.substr(s.start, s.end - s.start), p, std::nullopt,
                          ToponymKind::other});
    }
    for (const auto& s : random_spans(rng, len, max_spans)) {
      PredictedToponym t{s.start, s.end, doc.text.substr(s.start, s.end - s.start), std::nullopt, std::nullopt};
      if (rng() % 5 != 0) {
        // Half the time land near a gold point so the 161 km cut is exercised.
        if (!doc.gold.empty() && rng() % 2) {
          const GeoPoint g = *doc.gold[rng() % doc.gold.size()].point;
          std::uniform_real_distribution<double> jitter(-2.0, 2.0);
          t.point = GeoPoint{std::clamp(g.lat + jitter(rng), -90.0, 90.0),
                             std::clamp(g.lon + jitter(rng), -180.0, 180.0)};
        } else {
          t.point = random_point(rng);
        }
      }
      out.toponyms.push_back(std::move(t));
    }
    inst.corpus.documents.push_back(std::move(doc));
    inst.predictions.push_back(std::move(out));
  }
  return inst;
}

/// Expected metrics computed with the reference matching and distance code.
inline reference::RefMetrics expected_metrics(const FuzzInstance& inst, const MetricsConfig& config) {
  std::size_t matched = 0, gold = 0, pred = 0;
  std::vector<long double> km;
  for (std::size_t d = 0; d < inst.corpus.documents.size(); ++d) {
    const Document& doc = inst.corpus.documents[d];
    const auto& preds = inst.predictions[d].toponyms;
    std::vector<reference::RefSpan> g, p;
    for (const auto& t : doc.gold) g.push_back({t.start, t.end});
    for (const auto& t : preds) p.push_back({t.start, t.end});
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (config.match_mode == MatchMode::exact) {
      pairs = reference::exact_pairs(g, p);
    } else {
      reference::OverlapOracle oracle(g, p);
      pairs = oracle.lexicographic_min();
    }
    matched += pairs.size();
    gold += g.size();
    pred += p.size();
    for (auto [gi, pi] : pairs) {
      if (!preds[pi].point || !doc.gold[gi].point) continue;
      km.push_back(reference::great_circle_km(doc.gold[gi].point->lat, doc.gold[gi].point->lon,
                                              preds[pi].point->lat, preds[pi].point->lon,
                                              config.earth_radius_km));
    }
  }
  return reference::metrics(matched, gold, pred, std::move(km), config.threshold_km, config.d_max_km,
                            inst.corpus.completeness == Completeness::partial);
}

/// Absolute tolerance for ratios, relative for kilometres.
inline bool close(const std::optional<double>& got, const std::optional<double>& want, double tol,
                  bool relative) {
  if (got.has_value() != want.has_value()) return false;
  if (!got) return true;
  const double scale = relative ? std::max(1.0, std::abs(*want)) : 1.0;
  return std::abs(*got - *want) <= tol * scale;
}

}  // namespace geobench::testing
