#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geobench/corpus.hpp"
#include "geobench/gazetteer.hpp"
#include "geobench/geo_point.hpp"

namespace geobench {

struct PredictedToponym {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string name;
  std::optional<GeoPoint> point;
  std::optional<std::int64_t> entry_id;

  friend bool operator==(const PredictedToponym&, const PredictedToponym&) = default;
};

struct TextSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string name;

  friend bool operator==(const TextSpan&, const TextSpan&) = default;
};

/// The bundled English stoplist, already normalized.
const std::set<std::string>& default_stoplist();

struct RecognizerConfig {
  std::size_t max_ngram = 5;
  bool require_capitalized = true;
  std::set<std::string> stoplist = default_stoplist();
  bool primary_names_only = false;
};

/// Longest-match dictionary recognizer over Unicode word tokens. Spans come
/// back non-overlapping and ascending.
std::vector<TextSpan> recognize_lexicon(const Document& doc, const Gazetteer& gazetteer,
                                        const RecognizerConfig& config = {});

/// Candidate with the largest population; ties go to the smallest id.
/// Throws NoCandidate when lookup(name) is empty.
const GazetteerEntry& resolve_population(std::string_view name, const Gazetteer& gazetteer);

/// Predictions for one document plus the ones rejected on validation.
struct ParseOutput {
  std::vector<PredictedToponym> toponyms;  // sorted by (start, end), unique spans
  std::size_t dropped = 0;
  std::vector<std::string> drop_reasons;
};

/// A geoparser instance. Instances are not required to be thread-safe;
/// concurrent callers each hold their own.
class Geoparser {
 public:
  virtual ~Geoparser() = default;
  virtual ParseOutput parse(const Document& doc) = 0;
};

/// Lexicon recognizer followed by the population resolver.
class BaselineGeoparser final : public Geoparser {
 public:
  BaselineGeoparser(const Gazetteer& gazetteer, RecognizerConfig config = {});
  ParseOutput parse(const Document& doc) override;

 private:
  const Gazetteer& gazetteer_;
  RecognizerConfig config_;
};

enum class GeoparserKind { builtin_baseline, external_process, external_http };

std::string_view to_string(GeoparserKind k) noexcept;
/// Throws UsageError.
GeoparserKind parse_geoparser_kind(std::string_view s);

inline constexpr std::chrono::milliseconds kDefaultAdapterTimeout{120'000};

struct ProcessAdapterParams {
  std::vector<std::string> command;  // argv; command[0] is looked up on PATH
  std::chrono::milliseconds timeout = kDefaultAdapterTimeout;
  std::string working_dir;  // empty: inherit
};

struct HttpAdapterParams {
  std::string endpoint;  // e.g. "http://127.0.0.1:8080"; "/parse" is appended
  std::chrono::milliseconds timeout = kDefaultAdapterTimeout;
  std::size_t max_connections = 4;
};

struct GeoparserSpec {
  GeoparserKind kind = GeoparserKind::builtin_baseline;
  std::string identifier;
  std::variant<RecognizerConfig, ProcessAdapterParams, HttpAdapterParams> parameters;

  /// Stable textual form of kind and parameters, used in cache keys.
  std::string canonical_parameters() const;
};

std::unique_ptr<Geoparser> make_geoparser(const GeoparserSpec& spec, const Gazetteer& gazetteer);

/// One-shot convenience: builds a geoparser for spec and parses doc.
ParseOutput parse(const GeoparserSpec& spec, const Document& doc, const Gazetteer& gazetteer);

}  // namespace geobench
