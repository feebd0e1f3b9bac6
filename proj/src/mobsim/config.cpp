#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>

#include "edgemind/common/errors.hpp"
#include "edgemind/mobsim/mobsim.hpp"

namespace edgemind::mobsim {
namespace {

// Quiet nights, a morning shoulder and an evening peak at 18:00.
constexpr std::array<double, 24> kDefaultProfile = {0.15, 0.10, 0.08, 0.08, 0.10, 0.20, 0.40, 0.70,
                                                    0.90, 0.85, 0.80, 0.85, 0.90, 0.85, 0.80, 0.85,
                                                    0.95, 1.10, 1.30, 1.10, 0.85, 0.60, 0.40, 0.25};

const std::set<std::string> kConfigKeys = {
    "n_stations",       "n_ues",          "days",
    "seed",             "layout",         "bbox",
    "corridors",        "daily_profile",  "weekday_multiplier",
    "weekend_multiplier", "session_rate_per_ue", "session_mean_s",
    "handover_rate_per_ue", "s1_fraction", "capacity_mbps",
    "epoch"};

const std::set<std::string> kCorridorKeys = {"path",    "flow_per_hour", "direction_bias", "batch_mean",
                                             "dwell_s", "dwell_jitter",  "hourly_profile"};

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

std::array<double, 24> read_profile(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 24) throw ConfigError(what + " must be an array of 24 numbers");
  std::array<double, 24> p{};
  for (std::size_t h = 0; h < 24; ++h) p[h] = j.at(h).get<double>();
  return p;
}

nlohmann::json profile_json(const std::array<double, 24>& p) { return nlohmann::json(std::vector<double>(p.begin(), p.end())); }

}  // namespace

SimConfig::SimConfig() : daily_profile(kDefaultProfile), epoch(parse_datetime("2017-01-30")) {}

TimePoint parse_datetime(const std::string& text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char tail = 0;
  const int n = std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &s, &tail);
  const bool date_only = n == 3 && text.size() == 10;
  const bool full = (n == 6 && text.size() == 19) || (n == 7 && tail == 'Z' && text.size() == 20);
  if (!date_only && !full) throw ConfigError("bad datetime '" + text + "' (want YYYY-MM-DD[THH:MM:SS[Z]])");
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) throw ConfigError("invalid datetime '" + text + "'");
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_datetime(TimePoint tp) {
  using namespace std::chrono;
  const auto day_start = floor<days>(tp);
  const year_month_day ymd{day_start};
  const hh_mm_ss hms{tp - day_start};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

void validate(const SimConfig& cfg) {
  if (cfg.n_stations < 2) throw ConfigError("n_stations must be >= 2");
  if (cfg.days < 1) throw ConfigError("days must be >= 1");
  for (double v : cfg.daily_profile) {
    if (!(v >= 0.0)) throw ConfigError("daily_profile values must be >= 0");
  }
  if (!(cfg.weekday_multiplier >= 0.0) || !(cfg.weekend_multiplier >= 0.0)) {
    throw ConfigError("weekday/weekend multipliers must be >= 0");
  }
  if (!(cfg.session_rate_per_ue >= 0.0)) throw ConfigError("session_rate_per_ue must be >= 0");
  if (!(cfg.session_mean_s > 0.0)) throw ConfigError("session_mean_s must be > 0");
  if (!(cfg.handover_rate_per_ue >= 0.0)) throw ConfigError("handover_rate_per_ue must be >= 0");
  if (!(cfg.s1_fraction >= 0.0 && cfg.s1_fraction <= 1.0)) throw ConfigError("s1_fraction must be in [0,1]");
  if (!(cfg.capacity_mbps > 0.0)) throw ConfigError("capacity_mbps must be > 0");
  const auto& b = cfg.bbox;
  if (!(b.lat_min < b.lat_max && b.lon_min < b.lon_max) || b.lat_min < -90.0 || b.lat_max > 90.0 ||
      b.lon_min < -180.0 || b.lon_max > 180.0) {
    throw ConfigError("bbox must satisfy lat_min < lat_max, lon_min < lon_max within valid ranges");
  }
  for (std::size_t c = 0; c < cfg.corridors.size(); ++c) {
    const auto& cor = cfg.corridors[c];
    const std::string where = "corridor " + std::to_string(c);
    if (cor.path.size() < 2) throw ConfigError(where + ": path length must be >= 2");
    for (std::size_t i = 0; i < cor.path.size(); ++i) {
      if (cor.path[i].index() >= cfg.n_stations) throw ConfigError(where + ": station id out of range");
      if (i > 0 && cor.path[i] == cor.path[i - 1]) throw ConfigError(where + ": adjacent path entries must differ");
    }
    if (!(cor.flow_per_hour >= 0.0)) throw ConfigError(where + ": flow_per_hour must be >= 0");
    if (!(cor.direction_bias >= 0.0 && cor.direction_bias <= 1.0)) {
      throw ConfigError(where + ": direction_bias must be in [0,1]");
    }
    if (!(cor.batch_mean >= 1.0)) throw ConfigError(where + ": batch_mean must be >= 1");
    if (!(cor.dwell_s > 0.0)) throw ConfigError(where + ": dwell_s must be > 0");
    if (!(cor.dwell_jitter >= 0.0 && cor.dwell_jitter < 1.0)) throw ConfigError(where + ": dwell_jitter must be in [0,1)");
    if (cor.hourly_profile) {
      for (double v : *cor.hourly_profile) {
        if (!(v >= 0.0)) throw ConfigError(where + ": hourly_profile values must be >= 0");
      }
    }
  }
}

SimConfig sim_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("simulation config must be a JSON object");
  reject_unknown(j, kConfigKeys, "simulation config");
  SimConfig cfg;
  try {
    cfg.n_stations = j.value("n_stations", cfg.n_stations);
    cfg.n_ues = j.value("n_ues", cfg.n_ues);
    cfg.days = j.value("days", cfg.days);
    cfg.seed = j.value("seed", cfg.seed);
    const std::string layout = j.value("layout", std::string("grid"));
    if (layout == "grid") {
      cfg.layout = Layout::grid;
    } else if (layout == "uniform-random") {
      cfg.layout = Layout::uniform_random;
    } else {
      throw ConfigError("layout must be 'grid' or 'uniform-random'");
    }
    if (j.contains("bbox")) {
      const auto& b = j.at("bbox");
      reject_unknown(b, {"lat_min", "lat_max", "lon_min", "lon_max"}, "bbox");
      cfg.bbox.lat_min = b.value("lat_min", cfg.bbox.lat_min);
      cfg.bbox.lat_max = b.value("lat_max", cfg.bbox.lat_max);
      cfg.bbox.lon_min = b.value("lon_min", cfg.bbox.lon_min);
      cfg.bbox.lon_max = b.value("lon_max", cfg.bbox.lon_max);
    }
    if (j.contains("daily_profile")) cfg.daily_profile = read_profile(j.at("daily_profile"), "daily_profile");
    cfg.weekday_multiplier = j.value("weekday_multiplier", cfg.weekday_multiplier);
    cfg.weekend_multiplier = j.value("weekend_multiplier", cfg.weekend_multiplier);
    cfg.session_rate_per_ue = j.value("session_rate_per_ue", cfg.session_rate_per_ue);
    cfg.session_mean_s = j.value("session_mean_s", cfg.session_mean_s);
    cfg.handover_rate_per_ue = j.value("handover_rate_per_ue", cfg.handover_rate_per_ue);
    cfg.s1_fraction = j.value("s1_fraction", cfg.s1_fraction);
    cfg.capacity_mbps = j.value("capacity_mbps", cfg.capacity_mbps);
    if (j.contains("epoch")) cfg.epoch = parse_datetime(j.at("epoch").get<std::string>());
    for (const auto& cj : j.value("corridors", nlohmann::json::array())) {
      reject_unknown(cj, kCorridorKeys, "corridor");
      Corridor c;
      for (const auto& id : cj.at("path")) c.path.emplace_back(id.get<std::uint32_t>());
      c.flow_per_hour = cj.value("flow_per_hour", c.flow_per_hour);
      c.direction_bias = cj.value("direction_bias", c.direction_bias);
      c.batch_mean = cj.value("batch_mean", c.batch_mean);
      c.dwell_s = cj.value("dwell_s", c.dwell_s);
      c.dwell_jitter = cj.value("dwell_jitter", c.dwell_jitter);
      if (cj.contains("hourly_profile")) c.hourly_profile = read_profile(cj.at("hourly_profile"), "hourly_profile");
      cfg.corridors.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("simulation config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

nlohmann::json to_json(const SimConfig& cfg) {
  nlohmann::json j;
  j["n_stations"] = cfg.n_stations;
  j["n_ues"] = cfg.n_ues;
  j["days"] = cfg.days;
  j["seed"] = cfg.seed;
  j["layout"] = cfg.layout == Layout::grid ? "grid" : "uniform-random";
  j["bbox"] = {{"lat_min", cfg.bbox.lat_min}, {"lat_max", cfg.bbox.lat_max},
               {"lon_min", cfg.bbox.lon_min}, {"lon_max", cfg.bbox.lon_max}};
  j["daily_profile"] = profile_json(cfg.daily_profile);
  j["weekday_multiplier"] = cfg.weekday_multiplier;
  j["weekend_multiplier"] = cfg.weekend_multiplier;
  j["session_rate_per_ue"] = cfg.session_rate_per_ue;
  j["session_mean_s"] = cfg.session_mean_s;
  j["handover_rate_per_ue"] = cfg.handover_rate_per_ue;
  j["s1_fraction"] = cfg.s1_fraction;
  j["capacity_mbps"] = cfg.capacity_mbps;
  j["epoch"] = format_datetime(cfg.epoch);
  j["corridors"] = nlohmann::json::array();
  for (const auto& c : cfg.corridors) {
    nlohmann::json cj;
    std::vector<std::uint32_t> path;
    for (auto id : c.path) path.push_back(id.value);
    cj["path"] = path;
    cj["flow_per_hour"] = c.flow_per_hour;
    cj["direction_bias"] = c.direction_bias;
    cj["batch_mean"] = c.batch_mean;
    cj["dwell_s"] = c.dwell_s;
    cj["dwell_jitter"] = c.dwell_jitter;
    if (c.hourly_profile) cj["hourly_profile"] = profile_json(*c.hourly_profile);
    j["corridors"].push_back(std::move(cj));
  }
  return j;
}

}  // namespace edgemind::mobsim
