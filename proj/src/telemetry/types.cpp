#include "edgemind/telemetry/types.hpp"

#include <algorithm>
#include <string>

#include "edgemind/common/errors.hpp"

namespace edgemind {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ho_x2: return "HO_X2";
    case EventKind::ho_s1: return "HO_S1";
    case EventKind::ctx_setup: return "CTX_SETUP";
    case EventKind::ctx_release: return "CTX_RELEASE";
  }
  return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  if (text == "HO_X2") return EventKind::ho_x2;
  if (text == "HO_S1") return EventKind::ho_s1;
  if (text == "CTX_SETUP") return EventKind::ctx_setup;
  if (text == "CTX_RELEASE") return EventKind::ctx_release;
  return std::nullopt;
}

std::vector<double> StationSeries::counts() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& p : values) out.push_back(static_cast<double>(p.n_ue));
  return out;
}

void sort_events(std::vector<Event>& events) {
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
}

void validate(const EventLog& log) {
  const auto n = log.stations.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = log.stations[i];
    if (s.id.index() != i) throw SchemaError("station ids must be dense 0..N-1 in order");
    if (!(s.lat >= -90.0 && s.lat <= 90.0)) throw SchemaError("station " + std::to_string(i) + ": lat out of range");
    if (!(s.lon >= -180.0 && s.lon <= 180.0)) throw SchemaError("station " + std::to_string(i) + ": lon out of range");
    if (!(s.capacity_mbps > 0.0)) throw SchemaError("station " + std::to_string(i) + ": capacity must be > 0");
  }
  std::int64_t prev = INT64_MIN;
  for (const auto& e : log.events) {
    if (e.t < prev) throw SchemaError("events not sorted by t");
    prev = e.t;
    if (e.t < 0 || e.t >= log.end_s) throw SchemaError("event time outside [0, end_s)");
    if (e.src.index() >= n) throw SchemaError("unknown station id " + std::to_string(e.src.value));
    if (is_handover(e.kind)) {
      if (!e.dst) throw SchemaError("handover without dst");
      if (e.dst->index() >= n) throw SchemaError("unknown station id " + std::to_string(e.dst->value));
      if (*e.dst == e.src) throw SchemaError("self handover at station " + std::to_string(e.src.value));
    } else if (e.dst) {
      throw SchemaError("context event with dst");
    }
  }
}

}  // namespace edgemind
