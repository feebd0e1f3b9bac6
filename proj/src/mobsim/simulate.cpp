#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "edgemind/common/errors.hpp"
#include "edgemind/common/geo.hpp"
#include "edgemind/common/rng.hpp"
#include "edgemind/mobsim/mobsim.hpp"

namespace edgemind::mobsim {
namespace {

constexpr std::size_t kNeighborCount = 4;
constexpr double kHour = 3600.0;

double max_of(const std::array<double, 24>& p) { return *std::max_element(p.begin(), p.end()); }

// Rate multiplier at second t: profile(hour) * weekday/weekend factor.
class Intensity {
 public:
  Intensity(const SimConfig& cfg, const std::array<double, 24>& profile) : cfg_(cfg), profile_(profile) {}

  double at(double t) const {
    using namespace std::chrono;
    const auto tp = cfg_.epoch + seconds{static_cast<std::int64_t>(std::floor(t))};
    const auto day = floor<days>(tp);
    const auto hour = static_cast<std::size_t>(duration_cast<hours>(tp - day).count());
    const unsigned wd = weekday{day}.c_encoding();  // 0 = Sunday
    const double mult = (wd == 0 || wd == 6) ? cfg_.weekend_multiplier : cfg_.weekday_multiplier;
    return profile_[hour] * mult;
  }

  double upper() const { return max_of(profile_) * std::max(cfg_.weekday_multiplier, cfg_.weekend_multiplier); }

 private:
  const SimConfig& cfg_;
  const std::array<double, 24>& profile_;
};

class EventSink {
 public:
  explicit EventSink(double s1_fraction) : s1_fraction_(s1_fraction) {}

  void setup(double t, StationId at, const std::string& ue) {
    events_.push_back({stamp(t), EventKind::ctx_setup, at, std::nullopt, ue});
  }
  void release(double t, StationId at, const std::string& ue) {
    events_.push_back({stamp(t), EventKind::ctx_release, at, std::nullopt, ue});
  }
  // The UE context moves with the handover: release at src, setup at dst.
  void handover(double t, StationId src, StationId dst, const std::string& ue, Rng& rng) {
    const auto kind = rng.bernoulli(s1_fraction_) ? EventKind::ho_s1 : EventKind::ho_x2;
    events_.push_back({stamp(t), kind, src, dst, ue});
    release(t, src, ue);
    setup(t, dst, ue);
  }

  std::vector<Event> take() { return std::move(events_); }

 private:
  static std::int64_t stamp(double t) { return static_cast<std::int64_t>(std::floor(t)); }

  double s1_fraction_;
  std::vector<Event> events_;
};

void simulate_background(const SimConfig& cfg, const std::vector<Station>& topo, EventSink& sink) {
  Rng sessions(sub_seed(cfg.seed, "sessions"));
  Rng moves(sub_seed(cfg.seed, "background"));
  const Intensity intensity(cfg, cfg.daily_profile);
  const double horizon = static_cast<double>(cfg.days) * 86400.0;
  const double rate_max = cfg.session_rate_per_ue * intensity.upper() / kHour;  // per second
  if (!(rate_max > 0.0) || cfg.n_ues == 0) return;

  std::vector<std::vector<StationId>> neighbors(topo.size());
  std::vector<std::vector<double>> weights(topo.size());
  for (std::size_t s = 0; s < topo.size(); ++s) {
    neighbors[s] = nearest_neighbors(topo, StationId(static_cast<std::uint32_t>(s)), kNeighborCount);
    for (auto nb : neighbors[s]) {
      const double d = geo::haversine_m({topo[s].lat, topo[s].lon}, {topo[nb.index()].lat, topo[nb.index()].lon});
      weights[s].push_back(1.0 / std::max(d, 1.0));
    }
  }

  for (std::size_t u = 0; u < cfg.n_ues; ++u) {
    const std::string ue = "u" + std::to_string(u);
    auto home = StationId(static_cast<std::uint32_t>(sessions.index(topo.size())));
    double t = 0.0;
    while (true) {
      // Thinning for the non-homogeneous session arrival process.
      t += sessions.exponential(1.0 / rate_max);
      if (t >= horizon) break;
      if (!sessions.bernoulli(intensity.at(t) * cfg.session_rate_per_ue / kHour / rate_max)) continue;
      const double stop = t + sessions.exponential(cfg.session_mean_s);
      StationId at = home;
      sink.setup(t, at, ue);
      double now = t;
      if (cfg.handover_rate_per_ue > 0.0) {
        while (true) {
          now += moves.exponential(kHour / cfg.handover_rate_per_ue);
          if (now >= stop) break;
          const auto& nb = neighbors[at.index()];
          if (nb.empty()) break;
          const StationId next = nb[moves.weighted(weights[at.index()])];
          sink.handover(now, at, next, ue, moves);
          at = next;
        }
      }
      sink.release(stop, at, ue);
      t = stop;
    }
  }
}

void simulate_corridors(const SimConfig& cfg, EventSink& sink) {
  const double horizon = static_cast<double>(cfg.days) * 86400.0;
  for (std::size_t c = 0; c < cfg.corridors.size(); ++c) {
    const auto& cor = cfg.corridors[c];
    Rng rng(sub_seed(sub_seed(cfg.seed, "corridors"), c));
    const auto& profile = cor.hourly_profile ? *cor.hourly_profile : cfg.daily_profile;
    const Intensity intensity(cfg, profile);
    const double batch_rate = cor.flow_per_hour / cor.batch_mean / kHour;
    const double rate_max = batch_rate * intensity.upper();
    if (!(rate_max > 0.0)) continue;

    double t = 0.0;
    std::size_t batch = 0;
    while (true) {
      t += rng.exponential(1.0 / rate_max);
      if (t >= horizon) break;
      if (!rng.bernoulli(intensity.at(t) * batch_rate / rate_max)) continue;
      const bool forward = rng.bernoulli(cor.direction_bias);
      std::vector<StationId> path = cor.path;
      if (!forward) std::reverse(path.begin(), path.end());
      std::vector<double> dwell(path.size());
      for (auto& d : dwell) d = cor.dwell_s * rng.uniform(1.0 - cor.dwell_jitter, 1.0 + cor.dwell_jitter);
      const auto members = 1 + rng.poisson(cor.batch_mean - 1.0);
      for (std::uint64_t m = 0; m < members; ++m) {
        const std::string ue = "c" + std::to_string(c) + "-" + std::to_string(batch) + "-" + std::to_string(m);
        double now = t + rng.uniform(0.0, 10.0);
        sink.setup(now, path[0], ue);
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
          now += dwell[k];
          sink.handover(now, path[k], path[k + 1], ue, rng);
        }
        sink.release(now + dwell.back(), path.back(), ue);
      }
      ++batch;
    }
  }
}

}  // namespace

std::vector<StationId> nearest_neighbors(const std::vector<Station>& stations, StationId of, std::size_t k) {
  const auto& a = stations.at(of.index());
  std::vector<std::pair<double, std::uint32_t>> d;
  for (const auto& s : stations) {
    if (s.id == of) continue;
    d.emplace_back(geo::haversine_m({a.lat, a.lon}, {s.lat, s.lon}), s.id.value);
  }
  std::sort(d.begin(), d.end());
  std::vector<StationId> out;
  for (std::size_t i = 0; i < std::min(k, d.size()); ++i) out.emplace_back(d[i].second);
  return out;
}

std::vector<Station> generate_topology(const SimConfig& cfg) {
  validate(cfg);
  const auto n = cfg.n_stations;
  const auto& b = cfg.bbox;
  std::vector<Station> out(n);
  if (cfg.layout == Layout::grid) {
    const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const auto rows = (n + cols - 1) / cols;
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = i / cols, c = i % cols;
      out[i].lat = b.lat_min + (b.lat_max - b.lat_min) * (static_cast<double>(r) + 0.5) / static_cast<double>(rows);
      out[i].lon = b.lon_min + (b.lon_max - b.lon_min) * (static_cast<double>(c) + 0.5) / static_cast<double>(cols);
    }
  } else {
    Rng rng(sub_seed(cfg.seed, "topology"));
    for (auto& s : out) {
      s.lat = rng.uniform(b.lat_min, b.lat_max);
      s.lon = rng.uniform(b.lon_min, b.lon_max);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i].id = StationId(static_cast<std::uint32_t>(i));
    out[i].capacity_mbps = cfg.capacity_mbps;
  }
  return out;
}

EventLog simulate(const SimConfig& cfg, const std::vector<Station>& topology) {
  validate(cfg);
  if (topology.size() != cfg.n_stations) throw ConfigError("topology size does not match n_stations");
  EventSink sink(cfg.s1_fraction);
  simulate_background(cfg, topology, sink);
  simulate_corridors(cfg, sink);

  EventLog log;
  log.stations = topology;
  log.epoch = cfg.epoch;
  log.end_s = cfg.days * 86400;
  log.events = sink.take();
  std::erase_if(log.events, [&](const Event& e) { return e.t >= log.end_s; });
  sort_events(log.events);
  return log;
}

std::vector<int> corridor_membership(const SimConfig& cfg) {
  std::vector<int> out(cfg.n_stations, -1);
  for (std::size_t c = 0; c < cfg.corridors.size(); ++c) {
    for (auto id : cfg.corridors[c].path) {
      if (id.index() < out.size() && out[id.index()] < 0) out[id.index()] = static_cast<int>(c);
    }
  }
  return out;
}

}  // namespace edgemind::mobsim
