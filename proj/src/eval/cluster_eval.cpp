#include "edgemind/eval/cluster_eval.hpp"

#include <ostream>
#include <string>

#include "edgemind/common/csv.hpp"
#include "edgemind/common/errors.hpp"
#include "edgemind/common/rng.hpp"
#include "edgemind/common/stats.hpp"
#include "edgemind/telemetry/telemetry.hpp"

namespace edgemind::eval {

HandoverSplit split_handovers(const HandoverCounts& counts, const clustering::ClusterAssignment& a) {
  const auto n = counts.counts.rows();
  if (counts.counts.cols() != n || static_cast<Eigen::Index>(a.labels.size()) != n) {
    throw ShapeError("assignment does not cover the stations in the handover counts");
  }
  HandoverSplit s;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto c = counts.counts(i, j);
      if (a.labels[static_cast<std::size_t>(i)] == a.labels[static_cast<std::size_t>(j)]) {
        s.intra += c;
      } else {
        s.inter += c;
      }
    }
  }
  return s;
}

std::optional<double> ratio(const HandoverSplit& s) {
  if (s.inter == 0) return std::nullopt;
  return static_cast<double>(s.intra) / static_cast<double>(s.inter);
}

std::optional<double> PeriodicResult::mean_R() const {
  std::vector<double> rs;
  for (const auto& p : points) {
    if (p.R) rs.push_back(*p.R);
  }
  if (rs.empty()) return std::nullopt;
  return stats::mean(rs);
}

PeriodicResult evaluate_periodic(const EventLog& log, clustering::Strategy strategy, std::size_t n_clusters,
                                 std::int64_t period_s, std::uint64_t seed, const PeriodicOptions& options) {
  if (period_s <= 0) throw ConfigError("clustering period must be > 0");
  const std::int64_t slot = options.score_bin_s > 0 ? options.score_bin_s : period_s;
  if (slot > period_s || period_s % slot != 0) throw ConfigError("score bin must divide the clustering period");
  const std::int64_t periods = log.end_s / period_s;
  if (periods < 2) throw InsufficientData("log must span at least two clustering periods");

  PeriodicResult out;
  if (strategy == clustering::Strategy::geographic) {
    out.assignments.push_back(clustering::cluster_geographic(log.stations, n_clusters, seed, options.cluster));
  }
  for (std::int64_t k = 1; k < periods; ++k) {
    const std::int64_t start = k * period_s;
    if (strategy == clustering::Strategy::data_driven) {
      // Only the previous period's handovers feed the assignment.
      const auto history = telemetry::count_handovers(log, start - period_s, period_s);
      out.assignments.push_back(clustering::cluster_data_driven(
          history, n_clusters, sub_seed(seed, static_cast<std::uint64_t>(k)), options.cluster));
    }
    const std::size_t used = out.assignments.size() - 1;
    for (std::int64_t s = start; s < start + period_s; s += slot) {
      const auto counts = telemetry::count_handovers(log, s, slot);
      const auto split = split_handovers(counts, out.assignments[used]);
      out.points.push_back({s, slot, split.intra, split.inter, ratio(split), used});
    }
  }
  return out;
}

std::vector<RatioRow> ratio_vs_clusters(const EventLog& log, clustering::Strategy strategy,
                                        const std::vector<std::size_t>& cluster_counts, std::int64_t period_s,
                                        const std::vector<std::uint64_t>& seeds, const PeriodicOptions& options) {
  if (seeds.size() < 2) throw ConfigError("ratio_vs_clusters needs at least two seeds");
  std::vector<RatioRow> rows;
  for (auto nc : cluster_counts) {
    std::vector<double> means;
    for (auto seed : seeds) {
      const auto result = evaluate_periodic(log, strategy, nc, period_s, seed, options);
      if (auto m = result.mean_R()) means.push_back(*m);
    }
    RatioRow row;
    row.n_clusters = nc;
    row.strategy = strategy;
    row.runs = means.size();
    if (!means.empty()) {
      const auto ci = stats::normal_ci95(means);
      row.mean_R = ci.mean;
      row.ci_lo = ci.lo;
      row.ci_hi = ci.hi;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_ratio_points(std::ostream& out, const std::vector<RatioPoint>& points) {
  out << "window_start,intra,inter,R\n";
  for (const auto& p : points) {
    out << p.window_start << ',' << p.intra << ',' << p.inter << ',';
    if (p.R) out << csv::format_double(*p.R);
    out << '\n';
  }
}

void write_ratio_table(std::ostream& out, const std::vector<RatioRow>& rows) {
  out << "n_clusters,strategy,mean_R,ci_lo,ci_hi\n";
  auto opt = [&](const std::optional<double>& v) {
    if (v) out << csv::format_double(*v);
  };
  for (const auto& r : rows) {
    out << r.n_clusters << ',' << clustering::to_string(r.strategy) << ',';
    opt(r.mean_R);
    out << ',';
    opt(r.ci_lo);
    out << ',';
    opt(r.ci_hi);
    out << '\n';
  }
}

void write_delays(std::ostream& out, const DelayReport& report) {
  out << "station,delay_us\n";
  for (std::size_t i = 0; i < report.delay_us.size(); ++i) {
    out << i << ',' << csv::format_double(report.delay_us[i]) << '\n';
  }
}

}  // namespace edgemind::eval
