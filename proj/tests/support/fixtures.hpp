#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "geobench/corpus.hpp"
#include "geobench/gazetteer.hpp"

namespace geobench::testing {

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "geobench") {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline GazetteerEntry entry(std::int64_t id, std::string name, double lat, double lon,
                            std::uint64_t population, std::string country = "",
                            std::vector<std::string> alternates = {}) {
  GazetteerEntry e;
  e.id = id;
  e.primary_name = std::move(name);
  e.alternate_names = std::move(alternates);
  e.point = {lat, lon};
  e.feature_class = 'P';
  e.feature_code = "PPL";
  e.population = population;
  e.country = std::move(country);
  return e;
}

/// One GeoNames-layout row (19 tab-separated columns).
inline std::string geonames_row(const std::string& id, const std::string& name,
                                const std::string& alternates, const std::string& lat,
                                const std::string& lon, const std::string& country,
                                const std::string& population) {
  std::vector<std::string> cols(19);
  cols[0] = id;
  cols[1] = name;
  cols[2] = name;
  cols[3] = alternates;
  cols[4] = lat;
  cols[5] = lon;
  cols[6] = "P";
  cols[7] = "PPL";
  cols[8] = country;
  cols[14] = population;
  cols[18] = "2020-01-01";
  std::string line;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) line += '\t';
    line += cols[i];
  }
  return line + "\n";
}

/// Invented, unambiguous place names with their coordinates.
struct PlantedPlace {
  const char* name;
  double lat, lon;
};

inline const std::vector<PlantedPlace>& planted_places() {
  static const std::vector<PlantedPlace> places = {
      {"Quellburg", 47.25, 9.5},       {"Zorvania", -12.5, 130.25},   {"Port Elderwick", 58.1, -5.2},
      {"Velmora", 35.75, 139.5},       {"Trask Hollow", 44.3, -71.1}, {"Obrenfeld", 51.9, 21.4},
      {"Kestrova", 60.2, 24.9},        {"Marlowen", -33.9, 18.4},     {"Ysterhaven", 52.4, 4.9},
      {"Brannock Falls", 46.8, -92.1}, {"Ulvendal", 63.4, 10.4},      {"Caldremont", 45.2, 5.7},
  };
  return places;
}

inline Gazetteer planted_gazetteer() {
  std::vector<GazetteerEntry> entries;
  std::int64_t id = 1000;
  for (const PlantedPlace& p : planted_places()) entries.push_back(entry(id++, p.name, p.lat, p.lon, 5000));
  return Gazetteer(std::move(entries));
}

/// 20 documents, each mentioning two or three planted places at known offsets.
inline Corpus planted_corpus() {
  static const char* templates[] = {
      "Delegates travelled from {0} to {1} last week.",
      "The river between {0} and {1} flooded again.",
      "Officials in {0} met counterparts from {1} and {2}.",
      "Rail service to {0} resumes Monday, while {1} waits.",
  };
  const auto& places = planted_places();
  Corpus corpus;
  corpus.name = "planted";
  corpus.completeness = Completeness::complete;
  for (int d = 0; d < 20; ++d) {
    const std::string tmpl = templates[d % 4];
    Document doc;
    doc.id = "doc-" + std::string(d < 10 ? "0" : "") + std::to_string(d);
    doc.source = "synthetic";
    std::size_t pos = 0;
    int slot = 0;
    while (pos < tmpl.size()) {
      if (tmpl[pos] == '{') {
        const PlantedPlace& p = places[(d * 3 + slot) % places.size()];
        const std::size_t start = doc.text.size();  // ASCII: bytes == scalars
        doc.text += p.name;
        doc.gold.push_back({start, doc.text.size(), p.name, GeoPoint{p.lat, p.lon}, std::nullopt,
                            ToponymKind::admin_unit});
        pos += 3;
        ++slot;
      } else {
        doc.text += tmpl[pos++];
      }
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

/// Writes a synthetic GeoNames-layout table. Roughly one row in 50 is made
/// invalid on purpose; the return value is the number of valid rows.
inline std::size_t write_synthetic_gazetteer(const std::filesystem::path& path, std::size_t rows,
                                             std::uint32_t seed,
                                             std::vector<std::string>* sample_names = nullptr) {
  static const char* syllables[] = {"ka", "lo", "ver", "mun", "del", "sar", "tin", "bro",
                                    "quel", "an", "ost", "rid", "ham", "ford", "wick", "by"};
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> syl(0, 15), nsyl(2, 4), bad(0, 49), pop(0, 2'000'000);
  std::uniform_real_distribution<double> lat(-89.9, 89.9), lon(-179.9, 179.9);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  std::string buf;
  std::size_t valid = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    std::string name;
    const int n = nsyl(rng);
    for (int s = 0; s < n; ++s) name += syllables[syl(rng)];
    name[0] = static_cast<char>(name[0] - 32);
    std::string alt = name + " City";
    std::string la = std::to_string(lat(rng));
    std::string id = std::to_string(i + 1);
    switch (bad(rng)) {
      case 0: la = "91.0"; break;
      case 1: id = "x" + id; break;
      default: ++valid; break;
    }
    if (sample_names && sample_names->size() < 2000 && i % 97 == 0) sample_names->push_back(name);
    buf += geonames_row(id, name, alt, la, std::to_string(lon(rng)), "ZZ", std::to_string(pop(rng)));
    if (buf.size() > (1 << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
  return valid;
}

/// Writes the planted gazetteer (GeoNames layout), the planted corpus, its
/// lowercased twin and a run config over both. Returns the config path.
/// geoparsers_json is the JSON array placed under "geoparsers".
inline std::filesystem::path write_planted_workspace(
    const std::filesystem::path& dir,
    const std::string& geoparsers_json =
        R"([{"kind": "builtin-baseline", "id": "baseline"},
            {"kind": "builtin-baseline", "id": "baseline-nocaps",
             "parameters": {"require_capitalized": false}}])") {
  std::string rows;
  std::int64_t id = 1000;
  for (const PlantedPlace& p : planted_places()) {
    rows += geonames_row(std::to_string(id++), p.name, "", std::to_string(p.lat), std::to_string(p.lon),
                         "ZZ", "5000");
  }
  write_text(dir / "gazetteer.tsv", rows);
  const Corpus corpus = planted_corpus();
  save_corpus(corpus, dir / "planted.jsonl");
  Corpus lower = degrade_case(corpus);
  lower.name = "planted-lower";
  save_corpus(lower, dir / "planted-lower.jsonl");
  const std::filesystem::path config = dir / "run.json";
  write_text(config, R"({
  "gazetteer": {"path": "gazetteer.tsv", "schema": "geonames"},
  "corpora": [
    {"path": "planted.jsonl", "completeness": "complete"},
    {"path": "planted-lower.jsonl", "completeness": "partial"}
  ],
  "geoparsers": )" + geoparsers_json + R"(,
  "metrics": {"match_mode": "exact"}
}
)");
  return config;
}

}  // namespace geobench::testing
