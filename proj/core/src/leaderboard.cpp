#include "geobench/leaderboard.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "geobench/errors.hpp"

namespace geobench {

std::string_view to_string(OrderingKey k) noexcept {
  return k == OrderingKey::accuracy ? "accuracy" : "f_score";
}

OrderingKey ordering_key_for(Completeness c) noexcept {
  return c == Completeness::partial ? OrderingKey::accuracy : OrderingKey::f_score;
}

namespace {

double key_value(const EvalReport& r, OrderingKey key) {
  const auto& v = key == OrderingKey::accuracy ? r.accuracy : r.f_score;
  return v.value_or(-1.0);
}

struct Column {
  const char* header;
  const char* json_key;
  std::optional<double> EvalReport::*field;
};

constexpr Column kRecognitionColumns[] = {
    {"precision", "precision", &EvalReport::precision},
    {"recall", "recall", &EvalReport::recall},
    {"f_score", "f_score", &EvalReport::f_score},
};
constexpr Column kAccuracyColumn = {"accuracy", "accuracy", &EvalReport::accuracy};
constexpr Column kResolutionColumns[] = {
    {"mean (km)", "mean", &EvalReport::mean_km},
    {"median (km)", "median", &EvalReport::median_km},
    {"AUC", "auc", &EvalReport::auc},
    {"acc@161", "acc_at_161", &EvalReport::acc_at_161},
};

std::vector<Column> columns_for(Completeness c) {
  std::vector<Column> cols;
  if (c == Completeness::complete) cols.assign(std::begin(kRecognitionColumns), std::end(kRecognitionColumns));
  cols.push_back(kAccuracyColumn);
  cols.insert(cols.end(), std::begin(kResolutionColumns), std::end(kResolutionColumns));
  return cols;
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace

Leaderboard compare(std::vector<LeaderboardRow> rows, Completeness completeness) {
  Leaderboard board;
  board.completeness = completeness;
  board.ordering_key = ordering_key_for(completeness);
  if (!rows.empty()) board.corpus = rows.front().report.corpus;
  for (const LeaderboardRow& row : rows) {
    if (row.report.corpus != board.corpus) {
      throw DataError("cannot compare reports from corpora \"" + board.corpus + "\" and \"" +
                      row.report.corpus + "\"");
    }
  }
  const OrderingKey key = board.ordering_key;
  std::sort(rows.begin(), rows.end(), [key](const LeaderboardRow& a, const LeaderboardRow& b) {
    const double va = key_value(a.report, key);
    const double vb = key_value(b.report, key);
    if (va != vb) return va > vb;
    return a.geoparser < b.geoparser;
  });
  board.rows = std::move(rows);
  return board;
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "text") return ReportFormat::text;
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw UsageError("format must be text, csv or json, got \"" + std::string(s) + "\"");
}

std::string render_report(const Leaderboard& board, ReportFormat format) {
  const auto cols = columns_for(board.completeness);

  if (format == ReportFormat::json) {
    nlohmann::json rows = nlohmann::json::array();
    for (const LeaderboardRow& row : board.rows) {
      nlohmann::json obj;
      obj["geoparser"] = row.geoparser;
      for (const Column& c : cols) {
        const auto& v = row.report.*c.field;
        obj[c.json_key] = v ? nlohmann::json(round3(*v)) : nlohmann::json(nullptr);
      }
      rows.push_back(std::move(obj));
    }
    return rows.dump(2) + "\n";
  }

  std::vector<std::vector<std::string>> table;
  table.emplace_back();
  table.back().push_back("geoparser");
  for (const Column& c : cols) table.back().push_back(c.header);
  for (const LeaderboardRow& row : board.rows) {
    std::vector<std::string> cells{row.geoparser};
    for (const Column& c : cols) {
      const auto& v = row.report.*c.field;
      cells.push_back(v ? fixed3(*v) : (format == ReportFormat::text ? "-" : ""));
    }
    table.push_back(std::move(cells));
  }

  std::ostringstream os;
  if (format == ReportFormat::csv) {
    for (const auto& cells : table) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << csv_field(cells[i]);
      }
      os << '\n';
    }
    return os.str();
  }

  std::vector<std::size_t> widths(table.front().size(), 0);
  for (const auto& cells : table) {
    for (std::size_t i = 0; i < cells.size(); ++i) widths[i] = std::max(widths[i], display_width(cells[i]));
  }
  for (const auto& cells : table) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::size_t pad = widths[i] - display_width(cells[i]);
      if (i == 0) {
        os << cells[i] << std::string(pad, ' ');
      } else {
        os << "  " << std::string(pad, ' ') << cells[i];
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace geobench
