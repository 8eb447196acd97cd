#include "geobench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "geobench/errors.hpp"

namespace geobench {

std::string_view to_string(MatchMode m) noexcept {
  return m == MatchMode::overlap ? "overlap" : "exact";
}

MatchMode parse_match_mode(std::string_view s) {
  if (s == "exact") return MatchMode::exact;
  if (s == "overlap") return MatchMode::overlap;
  throw UsageError("match mode must be \"exact\" or \"overlap\", got \"" + std::string(s) + "\"");
}

void MetricsConfig::validate() const {
  if (!(threshold_km > 0.0)) throw UsageError("threshold_km must be positive");
  if (!(d_max_km > threshold_km)) throw UsageError("d_max_km must exceed threshold_km");
  if (!(earth_radius_km > 0.0)) throw UsageError("earth_radius_km must be positive");
}

// ---------------------------------------------------------------------------
// Alignment

namespace {

void require_sorted(std::span<const Span> spans, const char* which) {
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (std::tie(spans[i].start, spans[i].end) < std::tie(spans[i - 1].start, spans[i - 1].end))
      throw std::invalid_argument(std::string(which) + " spans are not sorted by (start, end)");
  }
}

bool intersects(const Span& a, const Span& b) { return a.start < b.end && b.start < a.end; }

Matching exact_align(std::span<const Span> gold, std::span<const Span> pred) {
  Matching m;
  std::size_t i = 0, j = 0;
  while (i < gold.size() && j < pred.size()) {
    const auto g = std::tie(gold[i].start, gold[i].end);
    const auto p = std::tie(pred[j].start, pred[j].end);
    if (g == p) {
      m.pairs.emplace_back(i++, j++);
    } else if (g < p) {
      m.unmatched_gold.push_back(i++);
    } else {
      m.unmatched_pred.push_back(j++);
    }
  }
  for (; i < gold.size(); ++i) m.unmatched_gold.push_back(i);
  for (; j < pred.size(); ++j) m.unmatched_pred.push_back(j);
  return m;
}

// Kuhn's augmenting-path matching restricted to golds [gold_from, gold_to)
// and the preds not marked blocked.
class BipartiteMatcher {
 public:
  BipartiteMatcher(const std::vector<std::vector<std::size_t>>& adj, std::size_t pred_count)
      : adj_(adj), owner_(pred_count, kNone), seen_(pred_count, 0) {}

  std::size_t max_matching(std::size_t gold_from, std::size_t gold_to,
                           const std::vector<char>& blocked) {
    std::fill(owner_.begin(), owner_.end(), kNone);
    std::size_t size = 0;
    for (std::size_t g = gold_from; g < gold_to; ++g) {
      ++stamp_;
      if (augment(g, blocked)) ++size;
    }
    return size;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool augment(std::size_t g, const std::vector<char>& blocked) {
    for (std::size_t p : adj_[g]) {
      if (blocked[p] || seen_[p] == stamp_) continue;
      seen_[p] = stamp_;
      if (owner_[p] == kNone || augment(owner_[p], blocked)) {
        owner_[p] = g;
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<std::size_t>>& adj_;
  std::vector<std::size_t> owner_;
  std::vector<std::size_t> seen_;
  std::size_t stamp_ = 0;
};

Matching overlap_align(std::span<const Span> gold, std::span<const Span> pred) {
  std::vector<std::vector<std::size_t>> adj(gold.size());
  for (std::size_t g = 0; g < gold.size(); ++g) {
    for (std::size_t p = 0; p < pred.size(); ++p) {
      if (pred[p].start >= gold[g].end) break;  // preds are sorted by start
      if (intersects(gold[g], pred[p])) adj[g].push_back(p);
    }
  }

  // Split positions into regions connected by overlap; golds and preds of
  // one region occupy contiguous index ranges, and the lexicographically
  // smallest maximum matching is the concatenation of per-region ones.
  struct Region {
    std::size_t gold_from, gold_to, pred_from, pred_to;
  };
  std::vector<Region> regions;
  {
    std::size_t gi = 0, pi = 0;
    while (gi < gold.size() || pi < pred.size()) {
      Region r{gi, gi, pi, pi};
      std::size_t reach = 0;
      bool first = true;
      while (true) {
        const bool take_gold =
            gi < gold.size() && (pi >= pred.size() || gold[gi].start <= pred[pi].start);
        const Span* next = take_gold ? &gold[gi] : (pi < pred.size() ? &pred[pi] : nullptr);
        if (!next || (!first && next->start >= reach)) break;
        reach = first ? next->end : std::max(reach, next->end);
        first = false;
        if (take_gold) {
          ++gi;
        } else {
          ++pi;
        }
      }
      r.gold_to = gi;
      r.pred_to = pi;
      regions.push_back(r);
    }
  }

  BipartiteMatcher matcher(adj, pred.size());
  std::vector<char> used(pred.size(), 0);
  Matching m;
  for (const Region& r : regions) {
    std::size_t remaining = matcher.max_matching(r.gold_from, r.gold_to, used);
    for (std::size_t g = r.gold_from; g < r.gold_to && remaining > 0; ++g) {
      for (std::size_t p : adj[g]) {
        if (used[p]) continue;
        used[p] = 1;
        if (matcher.max_matching(g + 1, r.gold_to, used) + 1 == remaining) {
          m.pairs.emplace_back(g, p);
          --remaining;
          break;
        }
        used[p] = 0;
      }
    }
  }

  std::vector<char> gold_matched(gold.size(), 0);
  for (const auto& [g, p] : m.pairs) gold_matched[g] = 1;
  for (std::size_t g = 0; g < gold.size(); ++g) {
    if (!gold_matched[g]) m.unmatched_gold.push_back(g);
  }
  for (std::size_t p = 0; p < pred.size(); ++p) {
    if (!used[p]) m.unmatched_pred.push_back(p);
  }
  return m;
}

template <typename T>
std::vector<Span> spans_of(std::span<const T> items) {
  std::vector<Span> out;
  out.reserve(items.size());
  for (const T& t : items) out.push_back({t.start, t.end});
  return out;
}

}  // namespace

Matching align(std::span<const Span> gold, std::span<const Span> pred, MatchMode mode) {
  require_sorted(gold, "gold");
  require_sorted(pred, "predicted");
  return mode == MatchMode::exact ? exact_align(gold, pred) : overlap_align(gold, pred);
}

Matching align(std::span<const GoldToponym> gold, std::span<const PredictedToponym> pred,
               MatchMode mode) {
  const auto g = spans_of(gold);
  const auto p = spans_of(pred);
  return align(std::span<const Span>(g), std::span<const Span>(p), mode);
}

// ---------------------------------------------------------------------------
// Recognition metrics

namespace {

void warn(Warnings* warnings, std::string message) {
  if (warnings) warnings->push_back(std::move(message));
}

}  // namespace

RecognitionScores precision_recall_f1(std::size_t matched, std::size_t gold, std::size_t predicted,
                                      Warnings* warnings) {
  RecognitionScores s;
  if (predicted == 0) {
    warn(warnings, "precision: no predictions, reported as 0");
  } else {
    s.precision = static_cast<double>(matched) / static_cast<double>(predicted);
  }
  if (gold == 0) {
    warn(warnings, "recall: no gold toponyms, reported as 0");
  } else {
    s.recall = static_cast<double>(matched) / static_cast<double>(gold);
  }
  const double sum = s.precision + s.recall;
  s.f_score = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
  return s;
}

RecognitionScores precision_recall_f1(const Matching& m, Warnings* warnings) {
  return precision_recall_f1(m.pairs.size(), m.pairs.size() + m.unmatched_gold.size(),
                             m.pairs.size() + m.unmatched_pred.size(), warnings);
}

double recognition_accuracy(std::size_t matched, std::size_t gold, Warnings* warnings) {
  if (gold == 0) {
    warn(warnings, "accuracy: no gold toponyms, reported as 0");
    return 0.0;
  }
  return static_cast<double>(matched) / static_cast<double>(gold);
}

double recognition_accuracy(const Matching& m, Warnings* warnings) {
  return recognition_accuracy(m.pairs.size(), m.pairs.size() + m.unmatched_gold.size(), warnings);
}

// ---------------------------------------------------------------------------
// Resolution metrics

double geodesic_distance(const GeoPoint& a, const GeoPoint& b, double radius_km) noexcept {
  constexpr double kRad = std::numbers::pi / 180.0;
  const double phi1 = a.lat * kRad;
  const double phi2 = b.lat * kRad;
  const double dphi = (b.lat - a.lat) * kRad;
  const double dlambda = (b.lon - a.lon) * kRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * radius_km * std::asin(std::sqrt(h));
}

DistanceErrors distance_errors(const Matching& m, std::span<const GoldToponym> gold,
                               std::span<const PredictedToponym> pred, double radius_km,
                               Warnings* warnings) {
  DistanceErrors out;
  out.km.reserve(m.pairs.size());
  for (const auto& [g, p] : m.pairs) {
    if (!pred[p].point) {
      ++out.unresolved_matched;
      continue;
    }
    ++out.resolved;
    if (!gold[g].point) {
      ++out.gold_without_point;
      continue;
    }
    out.km.push_back(geodesic_distance(*gold[g].point, *pred[p].point, radius_km));
  }
  if (out.gold_without_point > 0) {
    warn(warnings, std::to_string(out.gold_without_point) +
                       " matched toponym(s) without gold coordinates skipped in distance metrics");
  }
  return out;
}

CentralTendency mean_median(std::span<const double> km, Warnings* warnings) {
  CentralTendency out;
  if (km.empty()) {
    warn(warnings, "mean/median: no distances");
    return out;
  }
  double sum = 0.0;
  for (double d : km) sum += d;
  out.mean = sum / static_cast<double>(km.size());

  std::vector<double> sorted(km.begin(), km.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  out.median = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
  return out;
}

std::optional<double> accuracy_at_threshold(std::span<const double> km, double threshold_km) {
  if (km.empty()) return std::nullopt;
  const auto within = std::count_if(km.begin(), km.end(), [&](double d) { return d <= threshold_km; });
  return static_cast<double>(within) / static_cast<double>(km.size());
}

std::optional<double> auc_distance(std::span<const double> km, double d_max_km, Warnings* warnings) {
  if (km.empty()) return std::nullopt;
  const double denom = std::log1p(d_max_km);
  std::size_t clamped = 0;
  double sum = 0.0;
  for (double d : km) {
    if (d > d_max_km) {
      ++clamped;
      d = d_max_km;
    } else if (d < 0.0) {
      d = 0.0;
    }
    sum += std::log1p(d) / denom;
  }
  if (clamped > 0) {
    warn(warnings, "auc: " + std::to_string(clamped) + " distance(s) above d_max clamped");
  }
  return sum / static_cast<double>(km.size());
}

// ---------------------------------------------------------------------------
// Report

EvalReport summarize(const EvalCounts& counts, std::span<const double> distances_km,
                     Completeness completeness, const MetricsConfig& config, Warnings warnings) {
  EvalReport r;
  r.completeness = completeness;
  r.counts = counts;
  r.counts.distances = distances_km.size();
  r.config = config;

  if (completeness == Completeness::complete) {
    const auto s = precision_recall_f1(counts.matched, counts.gold, counts.predicted, &warnings);
    r.precision = s.precision;
    r.recall = s.recall;
    r.f_score = s.f_score;
  }
  r.accuracy = recognition_accuracy(counts.matched, counts.gold, &warnings);

  const auto central = mean_median(distances_km, &warnings);
  r.mean_km = central.mean;
  r.median_km = central.median;
  r.acc_at_161 = accuracy_at_threshold(distances_km, config.threshold_km);
  r.auc = auc_distance(distances_km, config.d_max_km, &warnings);
  r.warnings = std::move(warnings);
  return r;
}

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw DataError(std::string("report field \"") + key + "\" must be a number");
  return it->get<double>();
}

}  // namespace

std::string to_json(const EvalReport& r, int indent) {
  json j;
  j["geoparser"] = r.geoparser;
  j["corpus"] = r.corpus;
  j["completeness"] = std::string(to_string(r.completeness));
  j["precision"] = optional_number(r.precision);
  j["recall"] = optional_number(r.recall);
  j["f_score"] = optional_number(r.f_score);
  j["accuracy"] = optional_number(r.accuracy);
  j["mean"] = optional_number(r.mean_km);
  j["median"] = optional_number(r.median_km);
  j["acc_at_161"] = optional_number(r.acc_at_161);
  j["auc"] = optional_number(r.auc);
  j["counts"] = {{"gold", r.counts.gold},
                 {"predicted", r.counts.predicted},
                 {"matched", r.counts.matched},
                 {"resolved", r.counts.resolved},
                 {"unresolved_matched", r.counts.unresolved_matched},
                 {"distances", r.counts.distances}};
  j["warnings"] = r.warnings;
  j["match_mode"] = std::string(to_string(r.config.match_mode));
  j["threshold_km"] = r.config.threshold_km;
  j["d_max_km"] = r.config.d_max_km;
  j["earth_radius_km"] = r.config.earth_radius_km;
  j["auc_formula"] = std::string(kAucFormula);
  j["aggregation"] = std::string(kAggregation);
  return j.dump(indent);
}

EvalReport eval_report_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
  try {
    EvalReport r;
    r.geoparser = j.at("geoparser").get<std::string>();
    r.corpus = j.at("corpus").get<std::string>();
    r.completeness = parse_completeness(j.at("completeness").get<std::string>());
    r.precision = read_optional(j, "precision");
    r.recall = read_optional(j, "recall");
    r.f_score = read_optional(j, "f_score");
    r.accuracy = read_optional(j, "accuracy");
    r.mean_km = read_optional(j, "mean");
    r.median_km = read_optional(j, "median");
    r.acc_at_161 = read_optional(j, "acc_at_161");
    r.auc = read_optional(j, "auc");
    const json& c = j.at("counts");
    r.counts.gold = c.at("gold").get<std::size_t>();
    r.counts.predicted = c.at("predicted").get<std::size_t>();
    r.counts.matched = c.at("matched").get<std::size_t>();
    r.counts.resolved = c.at("resolved").get<std::size_t>();
    r.counts.unresolved_matched = c.at("unresolved_matched").get<std::size_t>();
    r.counts.distances = c.at("distances").get<std::size_t>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.config.match_mode = parse_match_mode(j.at("match_mode").get<std::string>());
    r.config.threshold_km = j.at("threshold_km").get<double>();
    r.config.d_max_km = j.at("d_max_km").get<double>();
    r.config.earth_radius_km = j.at("earth_radius_km").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace geobench
