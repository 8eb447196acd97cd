#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geobench/corpus.hpp"
#include "geobench/geo_point.hpp"
#include "geobench/geoparser.hpp"

namespace geobench {

inline constexpr double kMeanEarthRadiusKm = 6371.0088;
inline constexpr double kDefaultThresholdKm = 161.0;
inline constexpr double kDefaultMaxDistanceKm = 20039.0;

enum class MatchMode { exact, overlap };

std::string_view to_string(MatchMode m) noexcept;
/// Throws UsageError.
MatchMode parse_match_mode(std::string_view s);

struct MetricsConfig {
  MatchMode match_mode = MatchMode::exact;
  double threshold_km = kDefaultThresholdKm;
  double d_max_km = kDefaultMaxDistanceKm;
  double earth_radius_km = kMeanEarthRadiusKm;

  /// Throws UsageError when an invariant is violated.
  void validate() const;

  friend bool operator==(const MetricsConfig&, const MetricsConfig&) = default;
};

using Warnings = std::vector<std::string>;

struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
};

struct Matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (gold, pred), ascending
  std::vector<std::size_t> unmatched_gold;
  std::vector<std::size_t> unmatched_pred;
};

/// One-to-one alignment of two span lists, each sorted by (start, end).
///
/// exact: pairs are spans with identical offsets.
/// overlap: a maximum-cardinality matching between intersecting spans; among
/// all maximum matchings the lexicographically smallest pair list is chosen.
///
/// Throws std::invalid_argument when either list is unsorted.
Matching align(std::span<const Span> gold, std::span<const Span> pred, MatchMode mode);
Matching align(std::span<const GoldToponym> gold, std::span<const PredictedToponym> pred,
               MatchMode mode);

struct RecognitionScores {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
};

/// Degenerate denominators give 0 and append a warning.
RecognitionScores precision_recall_f1(std::size_t matched, std::size_t gold, std::size_t predicted,
                                      Warnings* warnings = nullptr);
RecognitionScores precision_recall_f1(const Matching& m, Warnings* warnings = nullptr);

double recognition_accuracy(std::size_t matched, std::size_t gold, Warnings* warnings = nullptr);
double recognition_accuracy(const Matching& m, Warnings* warnings = nullptr);

/// Haversine great-circle distance on a sphere.
double geodesic_distance(const GeoPoint& a, const GeoPoint& b,
                         double radius_km = kMeanEarthRadiusKm) noexcept;

struct DistanceErrors {
  std::vector<double> km;              // one per pair with both points present
  std::size_t resolved = 0;            // pairs whose prediction carries a point
  std::size_t unresolved_matched = 0;  // pairs whose prediction has no point
  std::size_t gold_without_point = 0;  // pairs skipped for lack of ground truth
};

DistanceErrors distance_errors(const Matching& m, std::span<const GoldToponym> gold,
                               std::span<const PredictedToponym> pred,
                               double radius_km = kMeanEarthRadiusKm,
                               Warnings* warnings = nullptr);

struct CentralTendency {
  std::optional<double> mean;
  std::optional<double> median;
};

CentralTendency mean_median(std::span<const double> km, Warnings* warnings = nullptr);

/// Fraction of distances <= threshold_km. Empty list gives nullopt.
std::optional<double> accuracy_at_threshold(std::span<const double> km, double threshold_km);

/// Mean of ln(1 + d) / ln(1 + d_max) with d clamped to [0, d_max].
std::optional<double> auc_distance(std::span<const double> km, double d_max_km,
                                   Warnings* warnings = nullptr);

struct EvalCounts {
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t matched = 0;
  std::size_t resolved = 0;
  std::size_t unresolved_matched = 0;
  std::size_t distances = 0;

  friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
};

inline constexpr std::string_view kAucFormula = "mean(ln(1+d)/ln(1+d_max))";
inline constexpr std::string_view kAggregation = "micro";

/// All eight metrics for one (geoparser, corpus) pair. Suppressed or
/// undefined metrics are nullopt.
struct EvalReport {
  std::string geoparser;
  std::string corpus;
  Completeness completeness = Completeness::complete;

  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f_score;
  std::optional<double> accuracy;
  std::optional<double> mean_km;
  std::optional<double> median_km;
  std::optional<double> acc_at_161;
  std::optional<double> auc;

  EvalCounts counts;
  Warnings warnings;
  MetricsConfig config;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Computes every metric from pooled counts and the pooled distance list.
/// Precision, recall and f_score are suppressed for partial corpora.
EvalReport summarize(const EvalCounts& counts, std::span<const double> distances_km,
                     Completeness completeness, const MetricsConfig& config,
                     Warnings warnings = {});

/// Flat JSON object keyed precision, recall, f_score, accuracy, mean, median,
/// acc_at_161, auc, plus counts, warnings and metadata. Absent values are null.
std::string to_json(const EvalReport& report, int indent = 2);
/// Throws DataError.
EvalReport eval_report_from_json(std::string_view json);

}  // namespace geobench
