#include "edgemind/common/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace edgemind::geo {
namespace {

constexpr double to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace

double haversine_m(LatLon a, LatLon b) {
  const double phi1 = to_rad(a.lat);
  const double phi2 = to_rad(b.lat);
  const double dphi = phi2 - phi1;
  const double dlambda = to_rad(b.lon - a.lon);
  const double s = std::sin(dphi / 2.0);
  const double t = std::sin(dlambda / 2.0);
  const double h = std::clamp(s * s + std::cos(phi1) * std::cos(phi2) * t * t, 0.0, 1.0);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

LatLon destination(LatLon origin, double bearing_deg, double distance_m) {
  const double delta = distance_m / kEarthRadiusM;
  const double theta = to_rad(bearing_deg);
  const double phi1 = to_rad(origin.lat);
  const double lambda1 = to_rad(origin.lon);
  const double phi2 =
      std::asin(std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(theta));
  const double lambda2 =
      lambda1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(phi1),
                           std::cos(delta) - std::sin(phi1) * std::sin(phi2));
  double lon = to_deg(lambda2);
  lon = std::fmod(lon + 540.0, 360.0) - 180.0;
  return {to_deg(phi2), lon};
}

}  // namespace edgemind::geo
