#include "geobench/cache.hpp"

#include <fstream>
#include <system_error>
#include <unistd.h>

#include "geobench/digest.hpp"
#include "geobench/errors.hpp"
#include "geobench/wire.hpp"

namespace geobench {

namespace {

std::string sanitize(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.' || c == '+';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? std::string("_") : out;
}

}  // namespace

std::string CacheKey::file_stem() const {
  Sha256 sha;
  sha.update(geoparser_id).update("\n").update(corpus_name).update("\n");
  sha.update(corpus_digest).update("\n").update(configuration_digest).update("\n");
  return sanitize(corpus_name) + "-" + sha.hex_digest().substr(0, 24);
}

PredictionCache::PredictionCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path PredictionCache::entry_path(const CacheKey& key) const {
  return dir_ / sanitize(key.geoparser_id) / (key.file_stem() + ".jsonl");
}

std::optional<std::vector<ParseOutput>> PredictionCache::load(const CacheKey& key,
                                                              const Corpus& corpus,
                                                              Warnings* warnings) const {
  const auto path = entry_path(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;

  auto corrupt = [&](const std::string& why) -> std::optional<std::vector<ParseOutput>> {
    if (warnings) {
      warnings->push_back("cache entry " + path.string() + " ignored (" + why + "); recomputed");
    }
    return std::nullopt;
  };

  std::vector<ParseOutput> out;
  out.reserve(corpus.documents.size());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (out.size() >= corpus.documents.size()) return corrupt("extra lines");
    try {
      ParseOutput parsed = wire::decode_response(line, corpus.documents[out.size()]);
      // A cached line is written from validated predictions; anything
      // dropped now means the file was altered.
      if (parsed.dropped > 0) return corrupt("invalid prediction on line " + std::to_string(line_no));
      out.push_back(std::move(parsed));
    } catch (const Error& e) {
      return corrupt("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (out.size() != corpus.documents.size()) return corrupt("truncated");
  return out;
}

void PredictionCache::store(const CacheKey& key, const Corpus& corpus,
                            const std::vector<ParseOutput>& predictions) const {
  if (predictions.size() != corpus.documents.size())
    throw std::invalid_argument("prediction count does not match corpus size");

  const auto path = entry_path(key);
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw DataError("cannot create cache directory " + path.parent_path().string());

  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write cache entry " + tmp.string());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      out << wire::encode_response(corpus.documents[i].id, predictions[i].toponyms) << '\n';
    }
    if (!out) throw DataError("failed writing cache entry " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("cannot move cache entry into place: " + path.string());
  }
}

}  // namespace geobench
