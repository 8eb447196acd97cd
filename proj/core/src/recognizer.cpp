#include <algorithm>

#include "geobench/errors.hpp"
#include "geobench/geoparser.hpp"
#include "geobench/unicode.hpp"

namespace geobench {

std::vector<TextSpan> recognize_lexicon(const Document& doc, const Gazetteer& gazetteer,
                                        const RecognizerConfig& config) {
  const std::size_t max_ngram = std::max<std::size_t>(config.max_ngram, 1);
  const std::u32string text = unicode::decode(doc.text);
  const std::vector<unicode::WordToken> tokens = unicode::word_tokens(text);

  auto accepts = [&](const std::string& key) {
    if (key.empty() || config.stoplist.contains(key)) return false;
    if (!config.primary_names_only) return gazetteer.contains_normalized(key);
    for (const GazetteerEntry* e : gazetteer.lookup_normalized(key)) {
      if (gazetteer.normalize(e->primary_name) == key) return true;
    }
    return false;
  };

  std::vector<TextSpan> spans;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (config.require_capitalized && !unicode::is_uppercase(text[tokens[i].start])) {
      ++i;
      continue;
    }
    const std::size_t longest = std::min(max_ngram, tokens.size() - i);
    std::size_t matched = 0;
    std::string surface;
    for (std::size_t n = longest; n >= 1; --n) {
      const std::size_t start = tokens[i].start;
      const std::size_t end = tokens[i + n - 1].end;
      std::string candidate = unicode::slice(text, start, end);
      if (accepts(gazetteer.normalize(candidate))) {
        matched = n;
        surface = std::move(candidate);
        break;
      }
    }
    if (matched == 0) {
      ++i;
      continue;
    }
    spans.push_back({tokens[i].start, tokens[i + matched - 1].end, std::move(surface)});
    i += matched;
  }
  return spans;
}

const GazetteerEntry& resolve_population(std::string_view name, const Gazetteer& gazetteer) {
  const auto candidates = gazetteer.lookup(name);
  if (candidates.empty()) throw NoCandidate(std::string(name));
  // Candidates are id-ascending, so keeping the first maximum breaks ties
  // toward the smallest id.
  const GazetteerEntry* best = candidates.front();
  for (const GazetteerEntry* e : candidates) {
    if (e->population > best->population) best = e;
  }
  return *best;
}

}  // namespace geobench
