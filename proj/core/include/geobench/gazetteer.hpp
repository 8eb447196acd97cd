#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "geobench/geo_point.hpp"

namespace geobench {

struct GazetteerEntry {
  std::int64_t id = 0;
  std::string primary_name;
  std::vector<std::string> alternate_names;
  GeoPoint point;
  char feature_class = '\0';  // '\0' when the source leaves it blank
  std::string feature_code;
  std::uint64_t population = 0;
  std::string country;  // ISO 3166-1 alpha-2 or empty

  friend bool operator==(const GazetteerEntry&, const GazetteerEntry&) = default;
};

/// Trims, collapses internal whitespace runs to one space and applies full
/// Unicode case folding. With fold_diacritics, nonspacing marks are removed
/// first. Idempotent.
std::string normalize_name(std::string_view name, bool fold_diacritics = false);

/// Zero-based column indices of a tab-separated place table.
struct ColumnMap {
  int id = 0;
  int name = 1;
  std::optional<int> alternates = 3;
  int lat = 4;
  int lon = 5;
  std::optional<int> feature_class = 6;
  std::optional<int> feature_code = 7;
  std::optional<int> country = 8;
  std::optional<int> population = 14;
  char alternates_separator = ',';
  bool skip_header = false;

  /// The 19-column GeoNames dump layout.
  static ColumnMap geonames() { return {}; }

  /// JSON object {"id": 0, "name": 1, "lat": 2, "lon": 3, ...}; keys other
  /// than id/name/lat/lon are optional. Throws DataError.
  static ColumnMap from_json(std::string_view json);
  static ColumnMap from_json_file(const std::filesystem::path& path);

  friend bool operator==(const ColumnMap&, const ColumnMap&) = default;
};

struct IngestOptions {
  ColumnMap columns = ColumnMap::geonames();
  bool fold_diacritics = false;
};

struct IngestDiagnostics {
  std::size_t rows_read = 0;
  std::size_t rows_accepted = 0;
  std::size_t rows_skipped = 0;
  std::map<std::string, std::size_t> skip_reasons;
};

/// Immutable place table with a normalized-name index.
class Gazetteer {
 public:
  /// Throws GazetteerError on an invalid entry or a duplicate id.
  explicit Gazetteer(std::vector<GazetteerEntry> entries, bool fold_diacritics = false);

  std::string normalize(std::string_view name) const {
    return normalize_name(name, fold_diacritics_);
  }

  /// Entries whose primary or alternate name normalizes to normalize(name),
  /// ascending by id. Pointers stay valid for the gazetteer's lifetime.
  std::vector<const GazetteerEntry*> lookup(std::string_view name) const;

  /// Same, for a key that is already normalized.
  std::vector<const GazetteerEntry*> lookup_normalized(std::string_view key) const;

  bool contains_normalized(std::string_view key) const;

  const GazetteerEntry* find(std::int64_t id) const;

  /// Ascending by id.
  std::span<const GazetteerEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t name_count() const noexcept { return index_.size(); }
  bool folds_diacritics() const noexcept { return fold_diacritics_; }

  /// Sorted (normalized name, ids) pairs, for exporting the index.
  std::vector<std::pair<std::string, std::vector<std::int64_t>>> index_listing() const;

  /// SHA-256 over the canonical entry data and the folding flag.
  std::string digest() const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<GazetteerEntry> entries_;
  // Posting lists hold positions into entries_, ascending (hence id order).
  std::unordered_map<std::string, std::vector<std::uint32_t>, Hash, std::equal_to<>> index_;
  bool fold_diacritics_ = false;
};

struct IngestResult {
  Gazetteer gazetteer;
  IngestDiagnostics diagnostics;
};

/// Reads a tab-separated table. Rows violating field constraints are skipped
/// and tallied. Throws GazetteerError when the file cannot be read or when
/// no row is valid.
IngestResult ingest_gazetteer(const std::filesystem::path& path, const IngestOptions& options = {});

}  // namespace geobench
