#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "geobench/corpus.hpp"
#include "geobench/metrics.hpp"

namespace geobench {

enum class OrderingKey { f_score, accuracy };

std::string_view to_string(OrderingKey k) noexcept;

/// f_score for complete corpora, accuracy for partial ones.
OrderingKey ordering_key_for(Completeness c) noexcept;

struct LeaderboardRow {
  std::string geoparser;
  EvalReport report;
};

struct Leaderboard {
  std::string corpus;
  Completeness completeness = Completeness::complete;
  OrderingKey ordering_key = OrderingKey::f_score;
  std::vector<LeaderboardRow> rows;  // descending by key, ties by id ascending
};

/// Throws DataError when the reports come from different corpora.
Leaderboard compare(std::vector<LeaderboardRow> rows, Completeness completeness);

enum class ReportFormat { text, csv, json };

/// Throws UsageError.
ReportFormat parse_report_format(std::string_view s);

/// Columns follow the metric order precision, recall, f_score, accuracy,
/// mean, median, AUC, acc@161; suppressed columns are left out. Values are
/// printed with three decimals; absent ones as "-" (text), empty (csv) or
/// null (json).
std::string render_report(const Leaderboard& board, ReportFormat format);

}  // namespace geobench
