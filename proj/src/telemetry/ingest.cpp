#include <algorithm>
#include <ostream>
#include <string>

#include "edgemind/common/csv.hpp"
#include "edgemind/common/errors.hpp"
#include "edgemind/telemetry/telemetry.hpp"

namespace edgemind::telemetry {

std::vector<Station> ingest_stations(const std::filesystem::path& path) {
  csv::Reader reader(path);
  reader.expect_header({"id", "lat", "lon", "capacity_mbps"});
  std::vector<Station> stations;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() != 4) reader.fail("expected 4 fields, got " + std::to_string(f.size()));
    Station s;
    const auto id = reader.to_int(f[0], "id");
    if (id != static_cast<std::int64_t>(stations.size())) reader.fail("station ids must be dense and ordered");
    s.id = StationId(static_cast<std::uint32_t>(id));
    s.lat = reader.to_double(f[1], "lat");
    s.lon = reader.to_double(f[2], "lon");
    s.capacity_mbps = reader.to_double(f[3], "capacity_mbps");
    if (s.lat < -90.0 || s.lat > 90.0) reader.fail("lat out of range");
    if (s.lon < -180.0 || s.lon > 180.0) reader.fail("lon out of range");
    if (!(s.capacity_mbps > 0.0)) reader.fail("capacity_mbps must be > 0");
    stations.push_back(s);
  }
  return stations;
}

EventLog ingest_events(const std::filesystem::path& path, std::vector<Station> stations,
                       const IngestOptions& options) {
  csv::Reader reader(path);
  reader.expect_header({"t_s", "kind", "src", "dst", "ue"});
  const auto n = static_cast<std::int64_t>(stations.size());
  auto station_of = [&](const std::string& field, std::string_view name) {
    const auto v = reader.to_int(field, name);
    if (v < 0 || v >= n) throw SchemaError(reader.source() + ":" + std::to_string(reader.line()) +
                                           ": unknown station id " + field);
    return StationId(static_cast<std::uint32_t>(v));
  };

  EventLog log;
  log.epoch = options.epoch;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() != 5) reader.fail("expected 5 fields, got " + std::to_string(f.size()));
    Event e;
    e.t = reader.to_int(f[0], "t_s");
    if (e.t < 0) reader.fail("negative timestamp");
    const auto kind = parse_event_kind(f[1]);
    if (!kind) throw SchemaError(reader.source() + ":" + std::to_string(reader.line()) + ": unknown kind '" + f[1] + "'");
    e.kind = *kind;
    e.src = station_of(f[2], "src");
    if (is_handover(e.kind)) {
      if (f[3].empty()) {
        throw SchemaError(reader.source() + ":" + std::to_string(reader.line()) + ": handover without dst");
      }
      e.dst = station_of(f[3], "dst");
      if (*e.dst == e.src) {
        throw SchemaError(reader.source() + ":" + std::to_string(reader.line()) + ": self handover");
      }
    } else if (!f[3].empty()) {
      throw SchemaError(reader.source() + ":" + std::to_string(reader.line()) + ": context event with dst");
    }
    if (f[4].empty()) reader.fail("empty ue id");
    e.ue = f[4];
    log.events.push_back(std::move(e));
  }
  sort_events(log.events);
  log.stations = std::move(stations);
  const std::int64_t last = log.events.empty() ? 0 : log.events.back().t + 1;
  log.end_s = options.end_s.value_or(last);
  if (log.end_s < last) throw SchemaError(reader.source() + ": events beyond end_s");
  validate(log);
  return log;
}

void write_stations(std::ostream& out, const std::vector<Station>& stations) {
  out << "id,lat,lon,capacity_mbps\n";
  for (const auto& s : stations) {
    out << s.id.value << ',' << csv::format_double(s.lat) << ',' << csv::format_double(s.lon) << ','
        << csv::format_double(s.capacity_mbps) << '\n';
  }
}

void write_events(std::ostream& out, const std::vector<Event>& events) {
  out << "t_s,kind,src,dst,ue\n";
  for (const auto& e : events) {
    out << e.t << ',' << to_string(e.kind) << ',' << e.src.value << ',';
    if (e.dst) out << e.dst->value;
    out << ',' << e.ue << '\n';
  }
}

void write_series(std::ostream& out, const std::vector<StationSeries>& series) {
  out << "station,bin,n_ue,utilization\n";
  for (const auto& s : series) {
    for (const auto& p : s.values) {
      out << s.station.value << ',' << p.bin << ',' << p.n_ue << ',' << csv::format_double(p.utilization) << '\n';
    }
  }
}

}  // namespace edgemind::telemetry
