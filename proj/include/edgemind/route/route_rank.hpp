#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edgemind/telemetry/types.hpp"

namespace edgemind::route {

struct Leg {
  StationId station{0};
  double dwell_s = 0.0;
};

struct Route {
  std::string name;
  std::vector<Leg> legs;

  double duration_s() const;
};

// Throws ConfigError on an empty route or a non-positive dwell.
void validate(const Route& r);

std::vector<Route> routes_from_json(const nlohmann::json& j);
std::vector<Route> read_routes(const std::string& path);

struct RouteMetrics {
  double S_hat = 0.0;    // Mbit/s, dwell-weighted mean per-user throughput
  double D_o_max = 0.0;  // s, longest run of consecutive outage dwell
  double duration_s = 0.0;
};

// Predicted user count at `station`, `lag` bins after `origin_bin`.
using Predictor = std::function<std::optional<double>(StationId station, std::int64_t origin_bin, std::size_t lag)>;

// Per-user throughput on a station given its predicted load.
using ThroughputModel = std::function<double(const Station& station, double n_users)>;

// capacity / max(1, n).
double equal_share(const Station& station, double n_users);

struct RouteOptions {
  std::int64_t bin_s = 300;
  std::size_t max_lag = 9;
  double s_min_mbps = 1.0;  // outage threshold
  ThroughputModel throughput = equal_share;
};

// Departure is seconds since the trace epoch. Leg i is entered at departure
// plus the dwell of legs 0..i-1 and uses the prediction made at the
// departure bin with lag max(1, arrival_bin - departure_bin). Throws
// MissingPrediction when that lag exceeds max_lag or the predictor has no
// value.
RouteMetrics route_metrics(const Route& route, std::int64_t departure_s, const Predictor& predictor,
                           const std::vector<Station>& stations, const RouteOptions& options = {});

enum class RankMetric { s_hat, d_o_max };
RankMetric parse_rank_metric(const std::string& s);  // "S_hat" | "D_o_max"

struct RankedRoute {
  std::string name;
  RouteMetrics metrics;
  std::size_t rank = 0;  // 1-based
};

// Descending S_hat or ascending D_o_max; ties go to the shorter route, then
// to the lexicographically smaller name.
std::vector<RankedRoute> rank_routes(const std::vector<Route>& routes, std::int64_t departure_s,
                                     const Predictor& predictor, const std::vector<Station>& stations,
                                     RankMetric metric, const RouteOptions& options = {});

// `route,departure,S_hat_mbps,D_o_max_s,rank`
void write_ranking_header(std::ostream& out);
void write_ranking(std::ostream& out, const std::string& departure, const std::vector<RankedRoute>& ranking);

}  // namespace edgemind::route
