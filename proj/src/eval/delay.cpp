#include <algorithm>

#include "edgemind/common/errors.hpp"
#include "edgemind/eval/cluster_eval.hpp"

namespace edgemind::eval {

DelayReport propagation_delay(const std::vector<Station>& stations, geo::LatLon datacenter) {
  if (datacenter.lat < -90.0 || datacenter.lat > 90.0 || datacenter.lon < -180.0 || datacenter.lon > 180.0) {
    throw ConfigError("datacenter coordinates out of range");
  }
  DelayReport r;
  double sum = 0.0;
  for (const auto& s : stations) {
    const double d = geo::haversine_m({s.lat, s.lon}, datacenter);
    const double us = d / geo::kFiberSpeedMps * 1e6;
    r.delay_us.push_back(us);
    sum += us;
    r.max_us = std::max(r.max_us, us);
  }
  if (!stations.empty()) r.mean_us = sum / static_cast<double>(stations.size());
  return r;
}

}  // namespace edgemind::eval
