#include "geobench/gazetteer.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "geobench/digest.hpp"
#include "geobench/errors.hpp"
#include "geobench/unicode.hpp"

namespace geobench {

namespace {

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  auto push = [&](std::string_view piece) {
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.append(piece);
  };
  if (is_ascii(s)) {
    for (char c : s) {
      if (unicode::is_whitespace(static_cast<char32_t>(c))) {
        pending_space = true;
      } else {
        push(std::string_view(&c, 1));
      }
    }
    return out;
  }
  for (char32_t c : unicode::decode(s)) {
    if (unicode::is_whitespace(c)) {
      pending_space = true;
    } else {
      push(unicode::encode(std::u32string_view(&c, 1)));
    }
  }
  return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_entry(const GazetteerEntry& e) {
  if (e.primary_name.empty())
    throw GazetteerError("entry " + std::to_string(e.id) + " has an empty primary name");
  if (!e.point.valid())
    throw GazetteerError("entry " + std::to_string(e.id) + " has out-of-range coordinates");
}

}  // namespace

std::string normalize_name(std::string_view name, bool fold_diacritics) {
  if (is_ascii(name)) return unicode::case_fold(collapse_whitespace(name));
  std::string s;
  if (fold_diacritics) {
    s = unicode::strip_diacritics(unicode::case_fold(unicode::strip_diacritics(name)));
  } else {
    s = unicode::case_fold(name);
  }
  return collapse_whitespace(s);
}

ColumnMap ColumnMap::from_json(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed column map: ") + e.what());
  }
  if (!j.is_object()) throw DataError("column map must be a JSON object");

  auto column = [&](const char* key) -> std::optional<int> {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer() || it->get<int>() < 0)
      throw DataError(std::string("column map \"") + key + "\" must be a non-negative integer");
    return it->get<int>();
  };
  auto required_column = [&](const char* key) {
    auto c = column(key);
    if (!c) throw DataError(std::string("column map is missing \"") + key + "\"");
    return *c;
  };

  ColumnMap m;
  m.id = required_column("id");
  m.name = required_column("name");
  m.lat = required_column("lat");
  m.lon = required_column("lon");
  m.alternates = column("alternates");
  m.feature_class = column("feature_class");
  m.feature_code = column("feature_code");
  m.country = column("country");
  m.population = column("population");
  if (auto it = j.find("alternates_separator"); it != j.end()) {
    if (!it->is_string() || it->get<std::string>().size() != 1)
      throw DataError("\"alternates_separator\" must be a one-character string");
    m.alternates_separator = it->get<std::string>()[0];
  }
  if (auto it = j.find("skip_header"); it != j.end()) {
    if (!it->is_boolean()) throw DataError("\"skip_header\" must be a boolean");
    m.skip_header = it->get<bool>();
  }
  return m;
}

ColumnMap ColumnMap::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read column map " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(text);
}

Gazetteer::Gazetteer(std::vector<GazetteerEntry> entries, bool fold_diacritics)
    : entries_(std::move(entries)), fold_diacritics_(fold_diacritics) {
  std::sort(entries_.begin(), entries_.end(),
            [](const GazetteerEntry& a, const GazetteerEntry& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    check_entry(entries_[i]);
    if (i > 0 && entries_[i - 1].id == entries_[i].id)
      throw GazetteerError("duplicate gazetteer id " + std::to_string(entries_[i].id));
  }
  if (entries_.size() > UINT32_MAX) throw GazetteerError("gazetteer too large");

  index_.reserve(entries_.size() + entries_.size() / 2);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto pos = static_cast<std::uint32_t>(i);
    auto add = [&](std::string_view name) {
      std::string key = normalize(name);
      if (key.empty()) return;
      auto& postings = index_[std::move(key)];
      // Positions arrive in ascending order; a name repeated within one
      // entry must not be listed twice.
      if (postings.empty() || postings.back() != pos) postings.push_back(pos);
    };
    add(entries_[i].primary_name);
    for (const std::string& alt : entries_[i].alternate_names) add(alt);
  }
}

std::vector<const GazetteerEntry*> Gazetteer::lookup(std::string_view name) const {
  return lookup_normalized(normalize(name));
}

std::vector<const GazetteerEntry*> Gazetteer::lookup_normalized(std::string_view key) const {
  std::vector<const GazetteerEntry*> out;
  auto it = index_.find(key);
  if (it == index_.end()) return out;
  out.reserve(it->second.size());
  for (std::uint32_t pos : it->second) out.push_back(&entries_[pos]);
  return out;
}

bool Gazetteer::contains_normalized(std::string_view key) const {
  return index_.find(key) != index_.end();
}

const GazetteerEntry* Gazetteer::find(std::int64_t id) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const GazetteerEntry& e, std::int64_t v) { return e.id < v; });
  if (it == entries_.end() || it->id != id) return nullptr;
  return &*it;
}

std::vector<std::pair<std::string, std::vector<std::int64_t>>> Gazetteer::index_listing() const {
  std::vector<std::pair<std::string, std::vector<std::int64_t>>> out;
  out.reserve(index_.size());
  for (const auto& [key, postings] : index_) {
    std::vector<std::int64_t> ids;
    ids.reserve(postings.size());
    for (std::uint32_t pos : postings) ids.push_back(entries_[pos].id);
    out.emplace_back(key, std::move(ids));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string Gazetteer::digest() const {
  Sha256 sha;
  sha.update(fold_diacritics_ ? "fold\n" : "nofold\n");
  std::string row;
  for (const GazetteerEntry& e : entries_) {
    row.clear();
    row += std::to_string(e.id);
    row += '\t';
    row += e.primary_name;
    row += '\t';
    for (const std::string& alt : e.alternate_names) {
      row += alt;
      row += '\x1f';
    }
    row += '\t';
    row += format_double(e.point.lat);
    row += '\t';
    row += format_double(e.point.lon);
    row += '\t';
    if (e.feature_class != '\0') row += e.feature_class;
    row += '\t';
    row += e.feature_code;
    row += '\t';
    row += std::to_string(e.population);
    row += '\t';
    row += e.country;
    row += '\n';
    sha.update(row);
  }
  return sha.hex_digest();
}

IngestResult ingest_gazetteer(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GazetteerError("cannot read gazetteer " + path.string());

  const ColumnMap& cols = options.columns;
  int min_columns = std::max({cols.id, cols.name, cols.lat, cols.lon});
  for (const auto& c : {cols.alternates, cols.feature_class, cols.feature_code, cols.country,
                        cols.population}) {
    if (c) min_columns = std::max(min_columns, *c);
  }
  const auto needed = static_cast<std::size_t>(min_columns) + 1;

  IngestDiagnostics diag;
  auto skip = [&](const char* reason) {
    ++diag.rows_skipped;
    ++diag.skip_reasons[reason];
  };

  std::vector<GazetteerEntry> entries;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && cols.skip_header) {
      first = false;
      continue;
    }
    first = false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++diag.rows_read;

    if (!unicode::is_valid_utf8(line)) {
      skip("invalid utf-8");
      continue;
    }
    const auto fields = split(line, '\t');
    if (fields.size() < needed) {
      skip("too few columns");
      continue;
    }

    GazetteerEntry e;
    if (!parse_number(fields[cols.id], e.id)) {
      skip("bad id");
      continue;
    }
    e.primary_name = std::string(trim(fields[cols.name]));
    if (normalize_name(e.primary_name, options.fold_diacritics).empty()) {
      skip("empty name");
      continue;
    }
    double lat = 0.0, lon = 0.0;
    if (!parse_number(fields[cols.lat], lat) || !parse_number(fields[cols.lon], lon)) {
      skip("bad coordinate");
      continue;
    }
    if (!GeoPoint::valid(lat, lon)) {
      skip("coordinate out of range");
      continue;
    }
    e.point = {lat, lon};

    if (cols.population) {
      const std::string_view pop = trim(fields[*cols.population]);
      if (!pop.empty()) {
        std::int64_t value = 0;
        if (!parse_number(pop, value) || value < 0) {
          skip("bad population");
          continue;
        }
        e.population = static_cast<std::uint64_t>(value);
      }
    }
    if (cols.feature_class) {
      const std::string_view fc = trim(fields[*cols.feature_class]);
      if (fc.size() > 1) {
        skip("bad feature class");
        continue;
      }
      if (!fc.empty()) e.feature_class = fc[0];
    }
    if (cols.feature_code) e.feature_code = std::string(trim(fields[*cols.feature_code]));
    if (cols.country) {
      const std::string_view cc = trim(fields[*cols.country]);
      if (!cc.empty() && cc.size() != 2) {
        skip("bad country code");
        continue;
      }
      e.country = std::string(cc);
    }
    if (cols.alternates) {
      const std::string_view alts = fields[*cols.alternates];
      if (!alts.empty()) {
        for (std::string_view alt : split(alts, cols.alternates_separator)) {
          alt = trim(alt);
          if (!alt.empty()) e.alternate_names.emplace_back(alt);
        }
      }
    }
    entries.push_back(std::move(e));
  }
  if (in.bad()) throw GazetteerError("error reading gazetteer " + path.string());

  // First occurrence of an id wins.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const GazetteerEntry& a, const GazetteerEntry& b) { return a.id < b.id; });
  auto last = std::unique(entries.begin(), entries.end(),
                          [](const GazetteerEntry& a, const GazetteerEntry& b) { return a.id == b.id; });
  const auto duplicates = static_cast<std::size_t>(std::distance(last, entries.end()));
  entries.erase(last, entries.end());
  if (duplicates > 0) {
    diag.rows_skipped += duplicates;
    diag.skip_reasons["duplicate id"] += duplicates;
  }

  diag.rows_accepted = entries.size();
  if (entries.empty()) throw GazetteerError("no valid rows in gazetteer " + path.string());
  return IngestResult{Gazetteer(std::move(entries), options.fold_diacritics), std::move(diag)};
}

}  // namespace geobench
