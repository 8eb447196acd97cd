#include "geobench/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "geobench/errors.hpp"
#include "geobench/unicode.hpp"

namespace geobench {

using nlohmann::json;

std::string_view to_string(Completeness c) noexcept {
  return c == Completeness::partial ? "partial" : "complete";
}

Completeness parse_completeness(std::string_view s) {
  if (s == "complete") return Completeness::complete;
  if (s == "partial") return Completeness::partial;
  throw DataError("completeness must be \"complete\" or \"partial\", got \"" + std::string(s) + "\"");
}

std::string_view to_string(ToponymKind k) noexcept {
  switch (k) {
    case ToponymKind::admin_unit: return "admin-unit";
    case ToponymKind::demonym: return "demonym";
    case ToponymKind::natural_feature: return "natural-feature";
    case ToponymKind::facility: return "facility";
    case ToponymKind::other: return "other";
  }
  return "other";
}

std::optional<ToponymKind> parse_toponym_kind(std::string_view s) noexcept {
  if (s == "admin-unit") return ToponymKind::admin_unit;
  if (s == "demonym") return ToponymKind::demonym;
  if (s == "natural-feature") return ToponymKind::natural_feature;
  if (s == "facility") return ToponymKind::facility;
  if (s == "other") return ToponymKind::other;
  return std::nullopt;
}

namespace {

std::size_t to_offset(const json& v, const char* field) {
  if (!v.is_number_integer()) throw DataError(std::string("\"") + field + "\" must be an integer");
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  const auto n = v.get<std::int64_t>();
  if (n < 0) throw DataError(std::string("\"") + field + "\" must be non-negative");
  return static_cast<std::size_t>(n);
}

const json& required(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing field \"") + key + "\"");
  return *it;
}

std::string required_string(const json& obj, const char* key) {
  const json& v = required(obj, key);
  if (!v.is_string()) throw DataError(std::string("\"") + key + "\" must be a string");
  return v.get<std::string>();
}

GoldToponym parse_gold(const json& t) {
  if (!t.is_object()) throw DataError("toponym entries must be objects");
  GoldToponym g;
  g.start = to_offset(required(t, "start"), "start");
  g.end = to_offset(required(t, "end"), "end");
  g.name = required_string(t, "name");

  const bool has_lat = t.contains("lat") && !t["lat"].is_null();
  const bool has_lon = t.contains("lon") && !t["lon"].is_null();
  if (has_lat != has_lon) throw DataError("toponym has only one of \"lat\"/\"lon\"");
  if (has_lat) {
    if (!t["lat"].is_number() || !t["lon"].is_number())
      throw DataError("\"lat\"/\"lon\" must be numbers");
    // Range is checked by validation so the error can name the document.
    g.point = GeoPoint{t["lat"].get<double>(), t["lon"].get<double>()};
  }
  if (auto it = t.find("gazetteer_id"); it != t.end() && !it->is_null()) {
    if (it->is_string()) {
      g.gazetteer_id = it->get<std::string>();
    } else if (it->is_number_integer()) {
      g.gazetteer_id = it->dump();
    } else {
      throw DataError("\"gazetteer_id\" must be a string");
    }
  }
  if (auto it = t.find("kind"); it != t.end() && !it->is_null()) {
    if (!it->is_string()) throw DataError("\"kind\" must be a string");
    auto kind = parse_toponym_kind(it->get<std::string>());
    if (!kind) throw DataError("unknown toponym kind \"" + it->get<std::string>() + "\"");
    g.kind = kind;
  }
  return g;
}

bool span_less(const GoldToponym& a, const GoldToponym& b) {
  return std::tie(a.start, a.end) < std::tie(b.start, b.end);
}

void validate_document(const Document& doc, ValidationReport& report) {
  auto add = [&](const GoldToponym* g, std::string message) {
    std::optional<std::pair<std::size_t, std::size_t>> span;
    if (g) span = std::make_pair(g->start, g->end);
    report.push_back({doc.id, span, std::move(message)});
  };

  if (doc.id.empty()) add(nullptr, "document id is empty");
  if (!unicode::is_valid_utf8(doc.text)) {
    add(nullptr, "text is not valid UTF-8");
    return;
  }
  const std::u32string text = unicode::decode(doc.text);

  for (std::size_t i = 0; i < doc.gold.size(); ++i) {
    const GoldToponym& g = doc.gold[i];
    if (g.start >= g.end) {
      add(&g, "span is empty or reversed");
    } else if (g.end > text.size()) {
      add(&g, "span end " + std::to_string(g.end) + " exceeds text length " +
                  std::to_string(text.size()));
    } else if (unicode::slice(text, g.start, g.end) != g.name) {
      add(&g, "surface form \"" + g.name + "\" does not match text \"" +
                  unicode::slice(text, g.start, g.end) + "\"");
    }
    if (g.point && !g.point->valid()) add(&g, "coordinates out of range");
    if (i > 0) {
      const GoldToponym& prev = doc.gold[i - 1];
      if (prev.start == g.start && prev.end == g.end) {
        add(&g, "duplicate span");
      } else if (span_less(g, prev)) {
        add(&g, "spans not sorted by (start, end)");
      }
    }
  }
}

}  // namespace

Document parse_document(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("record must be a JSON object");

  Document doc;
  doc.id = required_string(j, "id");
  doc.text = required_string(j, "text");
  const json& toponyms = required(j, "toponyms");
  if (!toponyms.is_array()) throw DataError("\"toponyms\" must be an array");
  doc.gold.reserve(toponyms.size());
  for (const json& t : toponyms) {
    try {
      doc.gold.push_back(parse_gold(t));
    } catch (const DataError& e) {
      throw DataError("document \"" + doc.id + "\": " + e.what());
    }
  }
  if (auto it = j.find("source"); it != j.end() && it->is_string()) doc.source = it->get<std::string>();
  return doc;
}

std::string serialize_document(const Document& doc) {
  json toponyms = json::array();
  for (const GoldToponym& g : doc.gold) {
    json t = {{"start", g.start}, {"end", g.end}, {"name", g.name}};
    if (g.point) {
      t["lat"] = g.point->lat;
      t["lon"] = g.point->lon;
    }
    if (g.gazetteer_id) t["gazetteer_id"] = *g.gazetteer_id;
    if (g.kind) t["kind"] = std::string(to_string(*g.kind));
    toponyms.push_back(std::move(t));
  }
  json j = {{"id", doc.id}, {"text", doc.text}, {"toponyms", std::move(toponyms)}};
  if (!doc.source.empty()) j["source"] = doc.source;
  return j.dump();
}

CorpusManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read manifest " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError("malformed manifest " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw DataError("manifest must be a JSON object");
  CorpusManifest m;
  m.name = required_string(j, "name");
  m.completeness = parse_completeness(required_string(j, "completeness"));
  return m;
}

Corpus load_corpus(const std::filesystem::path& path, Completeness completeness, std::string name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot read corpus " + path.string(), 0, {});

  Corpus corpus;
  corpus.name = name.empty() ? path.stem().string() : std::move(name);
  corpus.completeness = completeness;

  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    Document doc;
    try {
      doc = parse_document(line);
    } catch (const DataError& e) {
      throw CorpusError(path.string() + ":" + std::to_string(line_no) + ": " + e.what(), line_no, {});
    }
    if (doc.source.empty()) doc.source = path.filename().string();
    std::stable_sort(doc.gold.begin(), doc.gold.end(), span_less);

    ValidationReport report;
    validate_document(doc, report);
    if (!report.empty()) {
      throw CorpusError(path.string() + ":" + std::to_string(line_no) + ": document \"" + doc.id +
                            "\": " + report.front().message,
                        line_no, doc.id);
    }
    if (!seen_ids.insert(doc.id).second) {
      throw CorpusError(path.string() + ":" + std::to_string(line_no) + ": duplicate document id \"" +
                            doc.id + "\"",
                        line_no, doc.id);
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, const std::filesystem::path& manifest) {
  const CorpusManifest m = load_manifest(manifest);
  return load_corpus(path, m.completeness, m.name);
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path,
                 const std::optional<std::filesystem::path>& manifest) {
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write corpus " + path.string());
    for (const Document& doc : corpus.documents) out << serialize_document(doc) << '\n';
    if (!out) throw DataError("failed writing corpus " + path.string());
  }
  if (manifest) {
    std::ofstream out(*manifest, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write manifest " + manifest->string());
    const json j = {{"name", corpus.name},
                    {"completeness", std::string(to_string(corpus.completeness))},
                    {"offsets", "unicode-scalar"}};
    out << j.dump(2) << '\n';
  }
}

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  std::set<std::string_view> ids;
  for (const Document& doc : corpus.documents) {
    if (!ids.insert(doc.id).second) report.push_back({doc.id, std::nullopt, "duplicate document id"});
    validate_document(doc, report);
  }
  return report;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.document_count = corpus.documents.size();
  std::size_t tokens = 0;
  for (const Document& doc : corpus.documents) {
    stats.toponym_count += doc.gold.size();
    for (const GoldToponym& g : doc.gold) {
      if (g.point) ++stats.toponyms_with_coordinates;
    }
    bool in_token = false;
    for (char32_t c : unicode::decode(doc.text)) {
      const bool ws = unicode::is_whitespace(c);
      if (!ws && !in_token) ++tokens;
      in_token = !ws;
    }
  }
  if (stats.document_count > 0) {
    stats.mean_tokens_per_document =
        static_cast<double>(tokens) / static_cast<double>(stats.document_count);
  }
  return stats;
}

Corpus degrade_case(const Corpus& corpus) {
  Corpus out = corpus;
  for (Document& doc : out.documents) {
    doc.text = unicode::lowercase_preserving_length(doc.text);
    for (GoldToponym& g : doc.gold) g.name = unicode::lowercase_preserving_length(g.name);
  }
  return out;
}

}  // namespace geobench
