#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "geobench/errors.hpp"
#include "geobench/harness.hpp"

namespace geobench {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::chrono::milliseconds seconds_field(const json& j, const char* key, std::chrono::milliseconds fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number() || it->get<double>() <= 0.0)
    throw UsageError(std::string("\"") + key + "\" must be a positive number of seconds");
  return std::chrono::milliseconds(static_cast<long long>(it->get<double>() * 1000.0));
}

RecognizerConfig parse_recognizer(const json& p, bool fold_diacritics) {
  RecognizerConfig rc;
  if (p.contains("default_stoplist") && !p.at("default_stoplist").get<bool>()) rc.stoplist.clear();
  if (auto it = p.find("max_ngram"); it != p.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 1) throw UsageError("\"max_ngram\" must be >= 1");
    rc.max_ngram = it->get<std::size_t>();
  }
  if (auto it = p.find("require_capitalized"); it != p.end()) rc.require_capitalized = it->get<bool>();
  if (auto it = p.find("primary_names_only"); it != p.end()) rc.primary_names_only = it->get<bool>();
  if (auto it = p.find("stoplist"); it != p.end()) {
    for (const auto& w : *it) {
      std::string key = normalize_name(w.get<std::string>(), fold_diacritics);
      if (!key.empty()) rc.stoplist.insert(std::move(key));
    }
  }
  return rc;
}

GeoparserSpec parse_geoparser(const json& g, const std::filesystem::path& base, bool fold_diacritics) {
  GeoparserSpec spec;
  spec.kind = parse_geoparser_kind(g.at("kind").get<std::string>());
  spec.identifier = g.at("id").get<std::string>();
  const json params = g.value("parameters", json::object());
  switch (spec.kind) {
    case GeoparserKind::builtin_baseline:
      spec.parameters = parse_recognizer(params, fold_diacritics);
      break;
    case GeoparserKind::external_process: {
      ProcessAdapterParams pp;
      const json& cmd = params.at("command");
      if (cmd.is_string()) {
        // A plain string is split on whitespace; no shell quoting.
        std::istringstream words(cmd.get<std::string>());
        for (std::string w; words >> w;) pp.command.push_back(w);
      } else {
        pp.command = cmd.get<std::vector<std::string>>();
      }
      if (pp.command.empty()) throw UsageError("geoparser \"" + spec.identifier + "\": empty command");
      pp.timeout = seconds_field(params, "timeout_s", kDefaultAdapterTimeout);
      pp.working_dir = resolve(base, params.value("working_dir", std::string("."))).lexically_normal().string();
      spec.parameters = std::move(pp);
      break;
    }
    case GeoparserKind::external_http: {
      HttpAdapterParams hp;
      hp.endpoint = params.at("endpoint").get<std::string>();
      hp.timeout = seconds_field(params, "timeout_s", kDefaultAdapterTimeout);
      if (auto it = params.find("max_connections"); it != params.end()) {
        if (!it->is_number_integer() || it->get<long long>() < 1)
          throw UsageError("\"max_connections\" must be >= 1");
        hp.max_connections = it->get<std::size_t>();
      }
      spec.parameters = std::move(hp);
      break;
    }
  }
  return spec;
}

}  // namespace

void RunConfig::validate() const {
  if (corpora.empty()) throw UsageError("run config needs at least one corpus");
  if (geoparsers.empty()) throw UsageError("run config needs at least one geoparser");
  std::set<std::string> names;
  for (const CorpusSource& c : corpora) {
    if (c.name.empty()) throw UsageError("corpus name must not be empty");
    if (!names.insert(c.name).second) throw UsageError("duplicate corpus name \"" + c.name + "\"");
  }
  std::set<std::string> ids;
  for (const GeoparserSpec& g : geoparsers) {
    if (g.identifier.empty()) throw UsageError("geoparser id must not be empty");
    if (!ids.insert(g.identifier).second)
      throw UsageError("duplicate geoparser id \"" + g.identifier + "\"");
  }
  if (parallelism < 1) throw UsageError("parallelism must be at least 1");
  metrics.validate();
}

RunConfig RunConfig::from_json(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("malformed run config: ") + e.what());
  }

  RunConfig config;
  try {
    const json& gz = j.at("gazetteer");
    config.gazetteer.path = resolve(base_dir, gz.at("path").get<std::string>());
    config.gazetteer.fold_diacritics = gz.value("fold_diacritics", false);
    if (auto it = gz.find("schema"); it != gz.end()) {
      if (it->is_object()) {
        config.gazetteer.columns = ColumnMap::from_json(it->dump());
      } else if (it->get<std::string>() != "geonames") {
        config.gazetteer.columns = ColumnMap::from_json_file(resolve(base_dir, it->get<std::string>()));
      }
    }

    for (const json& c : j.at("corpora")) {
      CorpusSource source;
      source.path = resolve(base_dir, c.at("path").get<std::string>());
      if (auto it = c.find("manifest"); it != c.end()) {
        source.manifest = resolve(base_dir, it->get<std::string>());
        const CorpusManifest m = load_manifest(*source.manifest);
        source.name = m.name;
        source.completeness = m.completeness;
        if (c.contains("completeness") &&
            parse_completeness(c.at("completeness").get<std::string>()) != m.completeness) {
          throw UsageError("corpus \"" + m.name + "\": completeness disagrees with its manifest");
        }
      } else {
        source.completeness = parse_completeness(c.at("completeness").get<std::string>());
      }
      if (auto it = c.find("name"); it != c.end()) source.name = it->get<std::string>();
      if (source.name.empty()) source.name = source.path.stem().string();
      config.corpora.push_back(std::move(source));
    }

    for (const json& g : j.at("geoparsers")) {
      config.geoparsers.push_back(parse_geoparser(g, base_dir, config.gazetteer.fold_diacritics));
    }

    if (auto it = j.find("metrics"); it != j.end()) {
      const json& m = *it;
      if (m.contains("match_mode")) config.metrics.match_mode = parse_match_mode(m.at("match_mode").get<std::string>());
      config.metrics.threshold_km = m.value("threshold_km", config.metrics.threshold_km);
      config.metrics.d_max_km = m.value("d_max_km", config.metrics.d_max_km);
      config.metrics.earth_radius_km = m.value("earth_radius_km", config.metrics.earth_radius_km);
    }
    if (auto it = j.find("cache_dir"); it != j.end() && !it->is_null()) {
      config.cache_dir = resolve(base_dir, it->get<std::string>());
    }
    if (auto it = j.find("parallelism"); it != j.end()) {
      if (!it->is_number_integer() || it->get<long long>() < 1) throw UsageError("\"parallelism\" must be >= 1");
      config.parallelism = it->get<std::size_t>();
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("invalid run config: ") + e.what());
  }
  config.validate();
  return config;
}

RunConfig RunConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read run config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(text, std::filesystem::absolute(path).parent_path());
}

}  // namespace geobench
