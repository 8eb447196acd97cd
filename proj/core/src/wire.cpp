#include "geobench/wire.hpp"

#include <algorithm>
#include <tuple>

#include <json.hpp>

#include "geobench/errors.hpp"
#include "geobench/unicode.hpp"

namespace geobench::wire {

using nlohmann::json;

std::string encode_request(const Document& doc) {
  return json{{"id", doc.id}, {"text", doc.text}}.dump();
}

std::string encode_response(std::string_view id, const std::vector<PredictedToponym>& toponyms) {
  json list = json::array();
  for (const PredictedToponym& p : toponyms) {
    json t = {{"start", p.start}, {"end", p.end}, {"name", p.name}};
    if (p.point) {
      t["lat"] = p.point->lat;
      t["lon"] = p.point->lon;
    }
    if (p.entry_id) t["entry_id"] = *p.entry_id;
    list.push_back(std::move(t));
  }
  return json{{"id", id}, {"toponyms", std::move(list)}}.dump();
}

namespace {

[[noreturn]] void protocol_error(const std::string& message, std::string_view payload) {
  throw AdapterProtocolError(message, std::string(payload));
}

}  // namespace

ParseOutput decode_response(std::string_view payload, const Document& doc) {
  json j;
  try {
    j = json::parse(payload);
  } catch (const json::parse_error& e) {
    protocol_error(std::string("malformed response: ") + e.what(), payload);
  }
  if (!j.is_object()) protocol_error("response must be a JSON object", payload);
  auto id = j.find("id");
  if (id == j.end() || !id->is_string()) protocol_error("response lacks a string \"id\"", payload);
  if (id->get<std::string>() != doc.id)
    protocol_error("response id \"" + id->get<std::string>() + "\" does not match request id \"" +
                       doc.id + "\"",
                   payload);
  auto list = j.find("toponyms");
  if (list == j.end() || !list->is_array()) protocol_error("response lacks a \"toponyms\" array", payload);

  const std::u32string text = unicode::decode(doc.text);
  ParseOutput out;
  auto drop = [&](std::string reason) {
    ++out.dropped;
    out.drop_reasons.push_back(doc.id + ": " + std::move(reason));
  };

  for (const json& t : *list) {
    if (!t.is_object()) {
      drop("prediction is not an object");
      continue;
    }
    auto start = t.find("start");
    auto end = t.find("end");
    auto name = t.find("name");
    if (start == t.end() || end == t.end() || !start->is_number_integer() ||
        !end->is_number_integer() || start->get<std::int64_t>() < 0 || end->get<std::int64_t>() < 0) {
      drop("prediction lacks integer offsets");
      continue;
    }
    PredictedToponym p;
    p.start = start->get<std::size_t>();
    p.end = end->get<std::size_t>();
    if (p.start >= p.end || p.end > text.size()) {
      drop("span (" + std::to_string(p.start) + ", " + std::to_string(p.end) +
           ") outside text of length " + std::to_string(text.size()));
      continue;
    }
    const std::string surface = unicode::slice(text, p.start, p.end);
    if (name != t.end() && !name->is_null()) {
      if (!name->is_string() || name->get<std::string>() != surface) {
        drop("name does not match text slice \"" + surface + "\"");
        continue;
      }
    }
    p.name = surface;

    auto lat = t.find("lat");
    auto lon = t.find("lon");
    const bool has_lat = lat != t.end() && !lat->is_null();
    const bool has_lon = lon != t.end() && !lon->is_null();
    if (has_lat || has_lon) {
      if (!has_lat || !has_lon || !lat->is_number() || !lon->is_number()) {
        drop("incomplete coordinates");
        continue;
      }
      auto point = GeoPoint::make(lat->get<double>(), lon->get<double>());
      if (!point) {
        drop("coordinates out of range");
        continue;
      }
      p.point = point;
    }
    if (auto eid = t.find("entry_id"); eid != t.end() && eid->is_number_integer()) {
      p.entry_id = eid->get<std::int64_t>();
    }
    out.toponyms.push_back(std::move(p));
  }

  std::stable_sort(out.toponyms.begin(), out.toponyms.end(),
                   [](const PredictedToponym& a, const PredictedToponym& b) {
                     return std::tie(a.start, a.end) < std::tie(b.start, b.end);
                   });
  std::vector<PredictedToponym> unique;
  unique.reserve(out.toponyms.size());
  for (PredictedToponym& p : out.toponyms) {
    if (!unique.empty() && unique.back().start == p.start && unique.back().end == p.end) {
      drop("duplicate span (" + std::to_string(p.start) + ", " + std::to_string(p.end) + ")");
      continue;
    }
    unique.push_back(std::move(p));
  }
  out.toponyms = std::move(unique);
  return out;
}

}  // namespace geobench::wire
