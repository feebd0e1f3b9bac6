#include <doctest.h>

#include <fstream>
#include <sstream>

#include "edgemind/common/errors.hpp"
#include "edgemind/mobsim/mobsim.hpp"
#include "edgemind/telemetry/telemetry.hpp"
#include "util.hpp"

using namespace edgemind;
using namespace edgemind::mobsim;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.n_stations = 6;
  cfg.n_ues = 40;
  cfg.days = 1;
  cfg.seed = 9;
  Corridor c;
  c.path = {StationId(0), StationId(1), StationId(2)};
  c.flow_per_hour = 30.0;
  c.batch_mean = 2.0;
  cfg.corridors.push_back(c);
  return cfg;
}

std::string events_csv(const EventLog& log) {
  std::ostringstream out;
  telemetry::write_events(out, log.events);
  return out.str();
}

}  // namespace

TEST_SUITE("mobsim") {
  TEST_CASE("same config gives identical logs") {
    const auto cfg = small_config();
    const auto topo = generate_topology(cfg);
    const auto a = simulate(cfg, topo);
    const auto b = simulate(cfg, generate_topology(cfg));
    CHECK(a.events == b.events);
    CHECK(events_csv(a) == events_csv(b));
    auto other = cfg;
    other.seed = 10;
    CHECK(events_csv(simulate(other, generate_topology(other))) != events_csv(a));
  }

  TEST_CASE("simulated logs satisfy the log invariants") {
    const auto cfg = small_config();
    const auto log = simulate(cfg, generate_topology(cfg));
    CHECK_NOTHROW(validate(log));
    CHECK(log.end_s == 86400);
    std::size_t handovers = 0;
    for (const auto& e : log.events) {
      if (!is_handover(e.kind)) continue;
      ++handovers;
      REQUIRE(e.dst.has_value());
      CHECK(*e.dst != e.src);
      CHECK(e.dst->index() < cfg.n_stations);
    }
    CHECK(handovers > 0);
  }

  TEST_CASE("no corridors and no background gives only context events") {
    auto cfg = small_config();
    cfg.corridors.clear();
    cfg.handover_rate_per_ue = 0.0;
    const auto log = simulate(cfg, generate_topology(cfg));
    CHECK_FALSE(log.events.empty());
    for (const auto& e : log.events) CHECK_FALSE(is_handover(e.kind));
  }

  TEST_CASE("a forward-only corridor hands over along its path") {
    auto cfg = small_config();
    cfg.handover_rate_per_ue = 0.0;
    cfg.corridors[0].direction_bias = 1.0;
    const auto log = simulate(cfg, generate_topology(cfg));
    std::size_t n = 0;
    for (const auto& e : log.events) {
      if (!is_handover(e.kind)) continue;
      ++n;
      const bool ab = e.src == StationId(0) && *e.dst == StationId(1);
      const bool bc = e.src == StationId(1) && *e.dst == StationId(2);
      CHECK_UNARY(ab || bc);
    }
    CHECK(n > 0);
  }

  TEST_CASE("the daily profile shapes the hourly load") {
    auto cfg = small_config();
    cfg.days = 7;
    cfg.corridors.clear();
    cfg.daily_profile.fill(0.1);
    cfg.daily_profile[18] = 1.0;
    const auto log = simulate(cfg, generate_topology(cfg));
    const auto series = telemetry::bin_user_counts(log, 300);
    std::array<double, 24> total{};
    for (const auto& s : series) {
      for (const auto& p : s.values) total[static_cast<std::size_t>((p.bin * 300 / 3600) % 24)] += double(p.n_ue);
    }
    CHECK(std::max_element(total.begin(), total.end()) - total.begin() == 18);
  }

  TEST_CASE("config parsing rejects unknown keys and bad values") {
    CHECK_THROWS_AS(sim_config_from_json(nlohmann::json{{"n_station", 4}}), ConfigError);
    CHECK_THROWS_AS(sim_config_from_json(nlohmann::json{{"n_stations", 1}}), ConfigError);
    CHECK_THROWS_AS(sim_config_from_json(nlohmann::json{{"days", 0}}), ConfigError);
    CHECK_THROWS_AS(sim_config_from_json(nlohmann::json{{"layout", "hex"}}), ConfigError);
    const nlohmann::json bad_path{{"n_stations", 3}, {"corridors", {{{"path", {0, 0, 1}}}}}};
    CHECK_THROWS_AS(sim_config_from_json(bad_path), ConfigError);
    const nlohmann::json out_of_range{{"n_stations", 3}, {"corridors", {{{"path", {0, 5}}}}}};
    CHECK_THROWS_AS(sim_config_from_json(out_of_range), ConfigError);
    const nlohmann::json bad_corridor_key{{"n_stations", 3}, {"corridors", {{{"path", {0, 1}}, {"speed", 2}}}}};
    CHECK_THROWS_AS(sim_config_from_json(bad_corridor_key), ConfigError);
  }

  TEST_CASE("config json round trip") {
    auto cfg = small_config();
    cfg.epoch = parse_datetime("2017-01-30");
    const auto back = sim_config_from_json(to_json(cfg));
    CHECK(to_json(back) == to_json(cfg));
    const auto a = simulate(cfg, generate_topology(cfg));
    const auto b = simulate(back, generate_topology(back));
    CHECK(a.events == b.events);
  }

  TEST_CASE("simulated trace survives a csv round trip") {
    test::TempDir dir;
    const auto cfg = small_config();
    const auto topo = generate_topology(cfg);
    const auto log = simulate(cfg, topo);
    {
      std::ofstream s(dir.path / "stations.csv"), e(dir.path / "events.csv");
      telemetry::write_stations(s, topo);
      telemetry::write_events(e, log.events);
    }
    telemetry::IngestOptions opt;
    opt.end_s = log.end_s;
    const auto st = telemetry::ingest_stations(dir.path / "stations.csv");
    const auto back = telemetry::ingest_events(dir.path / "events.csv", st, opt);
    CHECK(back.events == log.events);
    CHECK(back.end_s == log.end_s);
  }

  TEST_CASE("datetimes") {
    const auto t = parse_datetime("2017-02-22T15:30:00Z");
    CHECK(format_datetime(t) == "2017-02-22T15:30:00Z");
    CHECK((parse_datetime("2017-02-22T00:00:00") - parse_datetime("2017-02-21")).count() == 86400);
    CHECK_THROWS_AS(parse_datetime("yesterday"), ConfigError);
  }

  TEST_CASE("topology and neighbours") {
    auto cfg = small_config();
    const auto topo = generate_topology(cfg);
    REQUIRE(topo.size() == 6);
    for (std::size_t i = 0; i < topo.size(); ++i) {
      CHECK(topo[i].id.index() == i);
      CHECK(topo[i].lat >= cfg.bbox.lat_min);
      CHECK(topo[i].lat <= cfg.bbox.lat_max);
    }
    const auto nn = nearest_neighbors(topo, StationId(0), 4);
    CHECK(nn.size() == 4);
    for (auto id : nn) CHECK(id != StationId(0));
    CHECK(corridor_membership(cfg) == std::vector<int>{0, 0, 0, -1, -1, -1});
  }
}
