#include "geobench/geoparser.hpp"

#include <sstream>

#include "geobench/adapters.hpp"
#include "geobench/errors.hpp"

namespace geobench {

std::string_view to_string(GeoparserKind k) noexcept {
  switch (k) {
    case GeoparserKind::builtin_baseline: return "builtin-baseline";
    case GeoparserKind::external_process: return "external-process";
    case GeoparserKind::external_http: return "external-http";
  }
  return "builtin-baseline";
}

GeoparserKind parse_geoparser_kind(std::string_view s) {
  if (s == "builtin-baseline") return GeoparserKind::builtin_baseline;
  if (s == "external-process") return GeoparserKind::external_process;
  if (s == "external-http") return GeoparserKind::external_http;
  throw UsageError("unknown geoparser kind \"" + std::string(s) + "\"");
}

BaselineGeoparser::BaselineGeoparser(const Gazetteer& gazetteer, RecognizerConfig config)
    : gazetteer_(gazetteer), config_(std::move(config)) {
  if (config_.max_ngram < 1) throw UsageError("max_ngram must be at least 1");
}

ParseOutput BaselineGeoparser::parse(const Document& doc) {
  ParseOutput out;
  for (TextSpan& span : recognize_lexicon(doc, gazetteer_, config_)) {
    PredictedToponym p{span.start, span.end, std::move(span.name), std::nullopt, std::nullopt};
    try {
      const GazetteerEntry& e = resolve_population(p.name, gazetteer_);
      p.point = e.point;
      p.entry_id = e.id;
    } catch (const NoCandidate&) {
      // Kept as an unresolved recognition.
    }
    out.toponyms.push_back(std::move(p));
  }
  return out;
}

std::string GeoparserSpec::canonical_parameters() const {
  std::ostringstream os;
  os << to_string(kind) << '\n';
  if (const auto* rc = std::get_if<RecognizerConfig>(&parameters)) {
    os << "max_ngram=" << rc->max_ngram << '\n'
       << "require_capitalized=" << rc->require_capitalized << '\n'
       << "primary_names_only=" << rc->primary_names_only << '\n'
       << "stoplist=";
    for (const std::string& w : rc->stoplist) os << w << '\x1f';
    os << '\n';
  } else if (const auto* pp = std::get_if<ProcessAdapterParams>(&parameters)) {
    os << "command=";
    for (const std::string& arg : pp->command) os << arg << '\x1f';
    os << '\n';
  } else if (const auto* hp = std::get_if<HttpAdapterParams>(&parameters)) {
    os << "endpoint=" << hp->endpoint << '\n';
  }
  return os.str();
}

std::unique_ptr<Geoparser> make_geoparser(const GeoparserSpec& spec, const Gazetteer& gazetteer) {
  switch (spec.kind) {
    case GeoparserKind::builtin_baseline: {
      const auto* rc = std::get_if<RecognizerConfig>(&spec.parameters);
      if (!rc) throw UsageError("geoparser \"" + spec.identifier + "\": expected recognizer settings");
      return std::make_unique<BaselineGeoparser>(gazetteer, *rc);
    }
    case GeoparserKind::external_process: {
      const auto* pp = std::get_if<ProcessAdapterParams>(&spec.parameters);
      if (!pp) throw UsageError("geoparser \"" + spec.identifier + "\": expected process settings");
      return std::make_unique<ProcessAdapter>(*pp);
    }
    case GeoparserKind::external_http: {
      const auto* hp = std::get_if<HttpAdapterParams>(&spec.parameters);
      if (!hp) throw UsageError("geoparser \"" + spec.identifier + "\": expected http settings");
      return std::make_unique<HttpAdapter>(*hp);
    }
  }
  throw UsageError("unknown geoparser kind");
}

ParseOutput parse(const GeoparserSpec& spec, const Document& doc, const Gazetteer& gazetteer) {
  return make_geoparser(spec, gazetteer)->parse(doc);
}

}  // namespace geobench
