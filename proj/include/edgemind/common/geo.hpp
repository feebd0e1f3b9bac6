#pragma once

namespace edgemind::geo {

inline constexpr double kEarthRadiusM = 6371008.8;  // IUGG mean radius
inline constexpr double kSpeedOfLightMps = 299792458.0;
inline constexpr double kFiberRefractiveIndex = 1.468;
inline constexpr double kFiberSpeedMps = kSpeedOfLightMps / kFiberRefractiveIndex;

struct LatLon {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
};

// Great-circle distance in metres.
double haversine_m(LatLon a, LatLon b);

// Point reached from `origin` travelling `distance_m` along initial bearing
// `bearing_deg` (clockwise from north).
LatLon destination(LatLon origin, double bearing_deg, double distance_m);

}  // namespace edgemind::geo
