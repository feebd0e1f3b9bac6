#include "edgemind/route/route_rank.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <tuple>

#include "edgemind/common/csv.hpp"
#include "edgemind/common/errors.hpp"

namespace edgemind::route {

double Route::duration_s() const {
  double total = 0.0;
  for (const auto& l : legs) total += l.dwell_s;
  return total;
}

void validate(const Route& r) {
  if (r.legs.empty()) throw ConfigError("route '" + r.name + "' has no legs");
  for (const auto& l : r.legs) {
    if (!(l.dwell_s > 0.0)) throw ConfigError("route '" + r.name + "' has a non-positive dwell");
  }
}

std::vector<Route> routes_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("route file must hold a JSON list");
  std::vector<Route> out;
  try {
    for (const auto& jr : j) {
      Route r;
      r.name = jr.at("name").get<std::string>();
      for (const auto& jl : jr.at("legs")) {
        r.legs.push_back({StationId(jl.at("station").get<std::uint32_t>()), jl.at("dwell_s").get<double>()});
      }
      validate(r);
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed route: ") + e.what());
  }
  return out;
}

std::vector<Route> read_routes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open route file " + path);
  try {
    return routes_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

double equal_share(const Station& station, double n_users) { return station.capacity_mbps / std::max(1.0, n_users); }

RouteMetrics route_metrics(const Route& route, std::int64_t departure_s, const Predictor& predictor,
                           const std::vector<Station>& stations, const RouteOptions& options) {
  validate(route);
  if (options.bin_s <= 0) throw ConfigError("route bin_s must be > 0");
  const auto floor_div = [](std::int64_t a, std::int64_t b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); };
  const std::int64_t origin = floor_div(departure_s, options.bin_s);

  RouteMetrics m;
  double elapsed = 0.0, weighted = 0.0, run = 0.0;
  for (const auto& leg : route.legs) {
    if (leg.station.index() >= stations.size()) throw ConfigError("route references unknown station");
    const auto arrival = static_cast<std::int64_t>(static_cast<double>(departure_s) + elapsed);
    const std::int64_t bin = floor_div(arrival, options.bin_s);
    const auto lag = static_cast<std::size_t>(std::max<std::int64_t>(1, bin - origin));
    if (lag > options.max_lag) {
      throw MissingPrediction("route '" + route.name + "' reaches lag " + std::to_string(lag) + " beyond the trained " +
                              std::to_string(options.max_lag));
    }
    const auto n = predictor(leg.station, origin, lag);
    if (!n) {
      throw MissingPrediction("no prediction for station " + std::to_string(leg.station.value) + " at bin " +
                              std::to_string(origin) + " lag " + std::to_string(lag));
    }
    const double s = options.throughput(stations[leg.station.index()], *n);
    weighted += s * leg.dwell_s;
    if (s < options.s_min_mbps) {
      run += leg.dwell_s;
      m.D_o_max = std::max(m.D_o_max, run);
    } else {
      run = 0.0;
    }
    elapsed += leg.dwell_s;
  }
  m.duration_s = elapsed;
  m.S_hat = weighted / elapsed;
  return m;
}

RankMetric parse_rank_metric(const std::string& s) {
  if (s == "S_hat") return RankMetric::s_hat;
  if (s == "D_o_max") return RankMetric::d_o_max;
  throw ConfigError("rank metric must be S_hat or D_o_max, got '" + s + "'");
}

std::vector<RankedRoute> rank_routes(const std::vector<Route>& routes, std::int64_t departure_s,
                                     const Predictor& predictor, const std::vector<Station>& stations,
                                     RankMetric metric, const RouteOptions& options) {
  if (routes.empty()) throw ConfigError("no routes to rank");
  std::vector<RankedRoute> out;
  for (const auto& r : routes) out.push_back({r.name, route_metrics(r, departure_s, predictor, stations, options), 0});
  std::sort(out.begin(), out.end(), [metric](const RankedRoute& a, const RankedRoute& b) {
    const double ka = metric == RankMetric::s_hat ? -a.metrics.S_hat : a.metrics.D_o_max;
    const double kb = metric == RankMetric::s_hat ? -b.metrics.S_hat : b.metrics.D_o_max;
    return std::tie(ka, a.metrics.duration_s, a.name) < std::tie(kb, b.metrics.duration_s, b.name);
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

void write_ranking_header(std::ostream& out) { out << "route,departure,S_hat_mbps,D_o_max_s,rank\n"; }

void write_ranking(std::ostream& out, const std::string& departure, const std::vector<RankedRoute>& ranking) {
  for (const auto& r : ranking) {
    out << r.name << "," << departure << "," << csv::format_double(r.metrics.S_hat) << ","
        << csv::format_double(r.metrics.D_o_max) << "," << r.rank << "\n";
  }
}

}  // namespace edgemind::route
