#pragma once

// The line protocol spoken with external geoparsers, also used as the
// on-disk prediction cache format.
//
//   request:  {"id": str, "text": str}
//   response: {"id": str, "toponyms": [{"start": int, "end": int, "name": str,
//                                       "lat": num?, "lon": num?}]}

#include <string>
#include <string_view>
#include <vector>

#include "geobench/corpus.hpp"
#include "geobench/geoparser.hpp"

namespace geobench::wire {

std::string encode_request(const Document& doc);

/// Predictions are written as given. "entry_id" is emitted when present.
std::string encode_response(std::string_view id, const std::vector<PredictedToponym>& toponyms);

/// Parses and validates a response for doc. Structural problems (bad JSON,
/// wrong id, missing fields) throw AdapterProtocolError with the raw payload.
/// Individual predictions with invalid spans, mismatched surface forms,
/// out-of-range coordinates or duplicate spans are dropped and counted.
ParseOutput decode_response(std::string_view payload, const Document& doc);

}  // namespace geobench::wire
