#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "edgemind/clustering/assignment.hpp"
#include "edgemind/common/geo.hpp"
#include "edgemind/telemetry/types.hpp"

namespace edgemind::eval {

struct HandoverSplit {
  std::int64_t intra = 0;
  std::int64_t inter = 0;
};

// Throws ShapeError when the assignment does not cover every station.
HandoverSplit split_handovers(const HandoverCounts& counts, const clustering::ClusterAssignment& a);

// intra / inter, or nullopt when inter == 0.
std::optional<double> ratio(const HandoverSplit& s);

struct RatioPoint {
  std::int64_t window_start = 0;
  std::int64_t window_len = 0;
  std::int64_t intra = 0;
  std::int64_t inter = 0;
  std::optional<double> R;
  std::size_t assignment = 0;  // index into PeriodicResult::assignments
};

struct PeriodicOptions {
  // Width of the scoring slots inside each clustering period; 0 scores the
  // whole period as one slot.
  std::int64_t score_bin_s = 0;
  clustering::ClusterOptions cluster;
};

struct PeriodicResult {
  std::vector<clustering::ClusterAssignment> assignments;
  std::vector<RatioPoint> points;

  // Mean of the defined R values, nullopt if there are none.
  std::optional<double> mean_R() const;
};

// Period k (k >= 1) is scored with the assignment computed from period
// k-1; period 0 only feeds the first assignment. The geographic strategy
// computes one static assignment and scores the same periods with it.
// Throws InsufficientData when the log spans fewer than two periods.
PeriodicResult evaluate_periodic(const EventLog& log, clustering::Strategy strategy, std::size_t n_clusters,
                                 std::int64_t period_s, std::uint64_t seed, const PeriodicOptions& options = {});

struct RatioRow {
  std::size_t n_clusters = 0;
  clustering::Strategy strategy = clustering::Strategy::data_driven;
  std::optional<double> mean_R;
  std::optional<double> ci_lo;
  std::optional<double> ci_hi;
  std::size_t runs = 0;  // seeds with a defined mean R
};

// One row per entry of `cluster_counts`; mean and 95% normal CI over the
// per-seed mean R. Needs at least two seeds.
std::vector<RatioRow> ratio_vs_clusters(const EventLog& log, clustering::Strategy strategy,
                                        const std::vector<std::size_t>& cluster_counts, std::int64_t period_s,
                                        const std::vector<std::uint64_t>& seeds, const PeriodicOptions& options = {});

struct DelayReport {
  std::vector<double> delay_us;  // per station, one way
  double mean_us = 0.0;
  double max_us = 0.0;
};

// Fiber propagation delay from each station to the datacenter along the
// great circle, at c / 1.468.
DelayReport propagation_delay(const std::vector<Station>& stations, geo::LatLon datacenter);

void write_ratio_points(std::ostream& out, const std::vector<RatioPoint>& points);
void write_ratio_table(std::ostream& out, const std::vector<RatioRow>& rows);
void write_delays(std::ostream& out, const DelayReport& report);

}  // namespace edgemind::eval
