#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace edgemind {

// Dense index into the station set, 0..N_g-1.
struct StationId {
  std::uint32_t value = 0;

  constexpr StationId() = default;
  constexpr explicit StationId(std::uint32_t v) : value(v) {}
  constexpr std::size_t index() const { return value; }
  friend constexpr auto operator<=>(StationId, StationId) = default;
};

struct Station {
  StationId id;
  double lat = 0.0;
  double lon = 0.0;
  double capacity_mbps = 1.0;
};

enum class EventKind { ho_x2, ho_s1, ctx_setup, ctx_release };

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);
constexpr bool is_handover(EventKind kind) { return kind == EventKind::ho_x2 || kind == EventKind::ho_s1; }

struct Event {
  std::int64_t t = 0;  // seconds since the trace epoch
  EventKind kind = EventKind::ctx_setup;
  StationId src;
  std::optional<StationId> dst;  // set iff kind is a handover
  std::string ue;

  friend bool operator==(const Event&, const Event&) = default;
};

using TimePoint = std::chrono::sys_seconds;

struct EventLog {
  std::vector<Event> events;  // non-decreasing in t
  std::vector<Station> stations;
  TimePoint epoch{};
  // Exclusive end of the observation period in seconds; open contexts are
  // closed here.
  std::int64_t end_s = 0;

  std::size_t n_stations() const { return stations.size(); }
};

struct SeriesPoint {
  std::int64_t bin = 0;
  std::int64_t n_ue = 0;
  double utilization = 0.0;  // fraction of the bin with at least one active UE
};

struct StationSeries {
  StationId station;
  std::int64_t bin_s = 300;
  std::vector<SeriesPoint> values;  // strictly increasing bin

  std::vector<double> counts() const;
};

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct HandoverCounts {
  std::int64_t window_start = 0;
  std::int64_t window_len = 0;
  CountMatrix counts;  // (i, j) = handovers from i to j; zero diagonal

  std::int64_t total() const { return counts.sum(); }
};

// Brings events into the canonical order: stable sort by t.
void sort_events(std::vector<Event>& events);

// Checks the EventLog invariants; throws SchemaError.
void validate(const EventLog& log);

}  // namespace edgemind
