#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edgemind/telemetry/types.hpp"

namespace edgemind::mobsim {

enum class Layout { grid, uniform_random };

struct BoundingBox {
  double lat_min = 37.70;
  double lat_max = 37.80;
  double lon_min = -122.50;
  double lon_max = -122.38;
};

// A group of UEs travelling a fixed station sequence ("a train line").
// Batches arrive as a Poisson process; all members of a batch share the
// per-station dwell times.
struct Corridor {
  std::vector<StationId> path;
  double flow_per_hour = 0.0;   // UEs per hour at profile multiplier 1
  double direction_bias = 1.0;  // probability of travelling path forward
  double batch_mean = 1.0;      // mean UEs per arrival batch
  double dwell_s = 120.0;       // mean dwell per station
  double dwell_jitter = 0.2;    // batch dwell ~ dwell_s * U(1-j, 1+j)
  // Overrides SimConfig::daily_profile for this corridor when set.
  std::optional<std::array<double, 24>> hourly_profile;
};

struct SimConfig {
  std::size_t n_stations = 10;
  std::size_t n_ues = 200;
  std::int64_t days = 1;
  std::uint64_t seed = 1;
  Layout layout = Layout::grid;
  BoundingBox bbox;
  std::vector<Corridor> corridors;
  std::array<double, 24> daily_profile{};
  double weekday_multiplier = 1.0;
  double weekend_multiplier = 1.0;
  double session_rate_per_ue = 0.5;   // sessions per hour at multiplier 1
  double session_mean_s = 1200.0;
  double handover_rate_per_ue = 2.0;  // background handovers per active hour
  double s1_fraction = 0.1;           // share of handovers signalled over S1
  double capacity_mbps = 100.0;
  TimePoint epoch{};                  // calendar time of t = 0

  SimConfig();
};

// Throws ConfigError on any invariant violation.
void validate(const SimConfig& cfg);

SimConfig sim_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimConfig& cfg);

// Parses `YYYY-MM-DD` or `YYYY-MM-DDTHH:MM:SS[Z]` as UTC.
TimePoint parse_datetime(const std::string& text);
std::string format_datetime(TimePoint tp);

std::vector<Station> generate_topology(const SimConfig& cfg);

EventLog simulate(const SimConfig& cfg, const std::vector<Station>& topology);

// Known communities: corridor index per station, or -1 for stations on no
// corridor. A station on several corridors takes the first.
std::vector<int> corridor_membership(const SimConfig& cfg);

// Indices of the `k` nearest other stations, nearest first.
std::vector<StationId> nearest_neighbors(const std::vector<Station>& stations, StationId of, std::size_t k);

}  // namespace edgemind::mobsim
