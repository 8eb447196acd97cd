#pragma once

#include <cmath>
#include <optional>

namespace geobench {

/// A WGS84 coordinate pair in decimal degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  static bool valid(double lat, double lon) noexcept {
    return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
           lon >= -180.0 && lon <= 180.0;
  }

  bool valid() const noexcept { return valid(lat, lon); }

  /// Empty when the pair is out of range or not finite.
  static std::optional<GeoPoint> make(double lat, double lon) noexcept {
    if (!valid(lat, lon)) return std::nullopt;
    return GeoPoint{lat, lon};
  }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

}  // namespace geobench
