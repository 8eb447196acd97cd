#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geobench/geo_point.hpp"

namespace geobench {

enum class Completeness { complete, partial };

std::string_view to_string(Completeness c) noexcept;
/// Throws DataError for anything but "complete" or "partial".
Completeness parse_completeness(std::string_view s);

/// Annotation-scheme tag; recorded, never used for filtering.
enum class ToponymKind { admin_unit, demonym, natural_feature, facility, other };

std::string_view to_string(ToponymKind k) noexcept;
std::optional<ToponymKind> parse_toponym_kind(std::string_view s) noexcept;

struct GoldToponym {
  std::size_t start = 0;  // scalar offset, inclusive
  std::size_t end = 0;    // scalar offset, exclusive
  std::string name;
  std::optional<GeoPoint> point;
  std::optional<std::string> gazetteer_id;
  std::optional<ToponymKind> kind;

  friend bool operator==(const GoldToponym&, const GoldToponym&) = default;
};

struct Document {
  std::string id;
  std::string text;  // UTF-8
  std::vector<GoldToponym> gold;
  std::string source;

  friend bool operator==(const Document&, const Document&) = default;
};

struct Corpus {
  std::string name;
  std::vector<Document> documents;
  Completeness completeness = Completeness::complete;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

struct CorpusManifest {
  std::string name;
  Completeness completeness = Completeness::complete;
};

struct CorpusStats {
  std::size_t document_count = 0;
  std::size_t toponym_count = 0;
  double mean_tokens_per_document = 0.0;
  std::size_t toponyms_with_coordinates = 0;
};

struct Violation {
  std::string document_id;
  std::optional<std::pair<std::size_t, std::size_t>> span;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Reads a line-delimited JSON corpus. Gold spans are sorted by (start, end)
/// and every document is validated; the first problem aborts with a
/// CorpusError carrying the line number and document id.
Corpus load_corpus(const std::filesystem::path& path, Completeness completeness,
                   std::string name = {});

/// As above, with name and completeness taken from a manifest file.
Corpus load_corpus(const std::filesystem::path& path, const std::filesystem::path& manifest);

CorpusManifest load_manifest(const std::filesystem::path& path);

/// Writes the corpus file and, when given, its manifest.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path,
                 const std::optional<std::filesystem::path>& manifest = std::nullopt);

/// One interchange-format line (no trailing newline).
std::string serialize_document(const Document& doc);

/// Parses one interchange-format line. Does not validate offsets.
Document parse_document(std::string_view line);

ValidationReport validate_corpus(const Corpus& corpus);

/// Tokens are maximal runs of non-whitespace scalars.
CorpusStats corpus_stats(const Corpus& corpus);

/// Lowercased stress variant; every offset stays valid.
Corpus degrade_case(const Corpus& corpus);

}  // namespace geobench
