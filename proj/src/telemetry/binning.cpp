#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>

#include "edgemind/common/errors.hpp"
#include "edgemind/telemetry/telemetry.hpp"

namespace edgemind::telemetry {
namespace {

struct Interval {
  std::int64_t start;
  std::int64_t end;  // exclusive
  std::uint32_t ue;
};

}  // namespace

std::vector<StationSeries> bin_user_counts(const EventLog& log, std::int64_t bin_s, BinningReport* report) {
  if (bin_s <= 0) throw ConfigError("bin_s must be > 0");
  BinningReport rep;
  const std::size_t n_stations = log.n_stations();
  const std::int64_t end = std::max<std::int64_t>(log.end_s, 0);
  const std::int64_t n_bins = (end + bin_s - 1) / bin_s;

  // Releases before setups at equal timestamps, so the result does not
  // depend on how ties were ordered in the input.
  std::vector<const Event*> ctx;
  for (const auto& e : log.events) {
    if (!is_handover(e.kind)) ctx.push_back(&e);
  }
  std::stable_sort(ctx.begin(), ctx.end(), [](const Event* a, const Event* b) {
    const int ra = a->kind == EventKind::ctx_release ? 0 : 1;
    const int rb = b->kind == EventKind::ctx_release ? 0 : 1;
    return std::tie(a->t, ra) < std::tie(b->t, rb);
  });

  std::unordered_map<std::string, std::uint32_t> ue_index;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> open;  // (ue, station) -> setup t
  std::vector<std::vector<Interval>> intervals(n_stations);

  auto close = [&](std::uint32_t ue, std::uint32_t station, std::int64_t start, std::int64_t stop) {
    stop = std::min(std::max(stop, start + 1), end);
    if (start < stop) intervals[station].push_back({start, stop, ue});
    ++rep.sessions;
  };

  for (const Event* e : ctx) {
    const auto [it, inserted] = ue_index.try_emplace(e->ue, static_cast<std::uint32_t>(ue_index.size()));
    const std::uint32_t ue = it->second;
    const auto key = std::make_pair(ue, e->src.value);
    if (e->kind == EventKind::ctx_setup) {
      if (!open.try_emplace(key, e->t).second) ++rep.duplicate_setups;
    } else {
      auto o = open.find(key);
      if (o == open.end()) {
        ++rep.unmatched_releases;
        continue;
      }
      close(ue, key.second, o->second, e->t);
      open.erase(o);
    }
  }
  for (const auto& [key, start] : open) {
    close(key.first, key.second, start, end);
    ++rep.open_at_end;
  }

  std::vector<StationSeries> out(n_stations);
  for (std::size_t s = 0; s < n_stations; ++s) {
    auto& series = out[s];
    series.station = StationId(static_cast<std::uint32_t>(s));
    series.bin_s = bin_s;
    series.values.resize(static_cast<std::size_t>(n_bins));
    for (std::int64_t b = 0; b < n_bins; ++b) series.values[static_cast<std::size_t>(b)].bin = b;

    auto& iv = intervals[s];
    std::vector<std::pair<std::int64_t, std::uint32_t>> touched;  // (bin, ue)
    for (const auto& i : iv) {
      for (std::int64_t b = i.start / bin_s; b <= (i.end - 1) / bin_s; ++b) touched.emplace_back(b, i.ue);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (const auto& [b, ue] : touched) ++series.values[static_cast<std::size_t>(b)].n_ue;

    // Busy time: union of intervals, spread over the bins it covers.
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.start < b.start; });
    std::vector<double> busy(static_cast<std::size_t>(n_bins), 0.0);
    auto add_busy = [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t b = lo / bin_s; b <= (hi - 1) / bin_s; ++b) {
        const std::int64_t a = std::max(lo, b * bin_s);
        const std::int64_t z = std::min(hi, (b + 1) * bin_s);
        busy[static_cast<std::size_t>(b)] += static_cast<double>(z - a);
      }
    };
    std::int64_t cur_lo = 0, cur_hi = -1;
    for (const auto& i : iv) {
      if (i.start > cur_hi) {
        if (cur_hi > cur_lo) add_busy(cur_lo, cur_hi);
        cur_lo = i.start;
        cur_hi = i.end;
      } else {
        cur_hi = std::max(cur_hi, i.end);
      }
    }
    if (cur_hi > cur_lo) add_busy(cur_lo, cur_hi);
    for (std::int64_t b = 0; b < n_bins; ++b) {
      series.values[static_cast<std::size_t>(b)].utilization =
          std::min(1.0, busy[static_cast<std::size_t>(b)] / static_cast<double>(bin_s));
    }
  }
  if (report) *report = rep;
  return out;
}

HandoverCounts count_handovers(const EventLog& log, std::int64_t window_start, std::int64_t window_len) {
  if (window_len <= 0) throw ConfigError("window_len must be > 0");
  const auto n = static_cast<Eigen::Index>(log.n_stations());
  HandoverCounts hc{window_start, window_len, CountMatrix::Zero(n, n)};
  const std::int64_t stop = window_start + window_len;
  auto first = std::lower_bound(log.events.begin(), log.events.end(), window_start,
                                [](const Event& e, std::int64_t t) { return e.t < t; });
  for (auto it = first; it != log.events.end() && it->t < stop; ++it) {
    if (!is_handover(it->kind)) continue;
    ++hc.counts(static_cast<Eigen::Index>(it->src.index()), static_cast<Eigen::Index>(it->dst->index()));
  }
  return hc;
}

}  // namespace edgemind::telemetry
