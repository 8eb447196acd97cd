#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "geobench/corpus.hpp"
#include "geobench/geoparser.hpp"
#include "geobench/metrics.hpp"

namespace geobench {

struct CacheKey {
  std::string geoparser_id;
  std::string corpus_name;
  std::string corpus_digest;
  /// Geoparser parameters, plus the gazetteer digest for the builtin.
  std::string configuration_digest;

  std::string file_stem() const;
};

/// Predictions for a whole corpus, stored one response line per document in
/// corpus order. Writes go to a temporary file that is renamed into place.
class PredictionCache {
 public:
  explicit PredictionCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path entry_path(const CacheKey& key) const;

  /// nullopt on a miss. A corrupt entry is treated as a miss and reported
  /// through warnings.
  std::optional<std::vector<ParseOutput>> load(const CacheKey& key, const Corpus& corpus,
                                               Warnings* warnings = nullptr) const;

  /// predictions[i] belongs to corpus.documents[i].
  void store(const CacheKey& key, const Corpus& corpus,
             const std::vector<ParseOutput>& predictions) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace geobench
