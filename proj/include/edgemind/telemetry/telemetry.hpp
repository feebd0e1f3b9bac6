#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "edgemind/telemetry/types.hpp"

namespace edgemind::telemetry {

// --- CSV ingestion -------------------------------------------------------

// Station CSV, header `id,lat,lon,capacity_mbps`. Ids must be dense 0..N-1.
std::vector<Station> ingest_stations(const std::filesystem::path& path);

struct IngestOptions {
  TimePoint epoch{};
  // Exclusive end of the observation period. Defaults to last event + 1.
  std::optional<std::int64_t> end_s;
};

// Event CSV, header `t_s,kind,src,dst,ue`. Output is stably sorted by t.
// Throws ParseError (with line) for malformed rows and SchemaError for
// unknown kinds, a missing/self dst on handovers, a dst on context events,
// or station ids outside `stations`.
EventLog ingest_events(const std::filesystem::path& path, std::vector<Station> stations,
                       const IngestOptions& options = {});

void write_stations(std::ostream& out, const std::vector<Station>& stations);
void write_events(std::ostream& out, const std::vector<Event>& events);
void write_series(std::ostream& out, const std::vector<StationSeries>& series);

// --- Binning ---------------------------------------------------------------

struct BinningReport {
  std::size_t sessions = 0;
  std::size_t unmatched_releases = 0;  // dropped
  std::size_t open_at_end = 0;         // closed at log.end_s
  std::size_t duplicate_setups = 0;    // setup while already active; ignored
};

// One dense series per station covering bins 0..ceil(end_s / bin_s)-1.
// n_ue counts the distinct UEs whose context interval [setup, release)
// intersects the bin (a zero-length context occupies its setup second).
std::vector<StationSeries> bin_user_counts(const EventLog& log, std::int64_t bin_s,
                                           BinningReport* report = nullptr);

// X2 and S1 handovers with t in [window_start, window_start + window_len).
HandoverCounts count_handovers(const EventLog& log, std::int64_t window_start, std::int64_t window_len);

}  // namespace edgemind::telemetry
