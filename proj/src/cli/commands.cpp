#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "edgemind/cli/cli.hpp"
#include "edgemind/clustering/assignment.hpp"
#include "edgemind/common/csv.hpp"
#include "edgemind/common/errors.hpp"
#include "edgemind/common/rng.hpp"
#include "edgemind/eval/cluster_eval.hpp"
#include "edgemind/forecast/experiment.hpp"
#include "edgemind/mobsim/mobsim.hpp"
#include "edgemind/route/route_rank.hpp"
#include "edgemind/telemetry/telemetry.hpp"
#include "manifest.hpp"

namespace edgemind::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void allow_keys(const json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!keys.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class T>
T get_req(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + " requires '" + key + "'");
  return get_or<T>(j, key, T{});
}

// Loaded config file plus the context needed to resolve relative paths.
struct Context {
  json cfg;
  std::string raw;
  fs::path base;
  fs::path out;
  std::uint64_t seed = 0;
  std::vector<fs::path> outputs;

  fs::path resolve(const std::string& p) const { return fs::path(p).is_absolute() ? fs::path(p) : base / p; }

  void emit(const std::string& name, const std::string& content) {
    const fs::path p = out / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCategory::data, "cannot write " + p.string());
    f << content;
    outputs.push_back(p);
  }
};

const std::set<std::string> kTopKeys = {"seed", "sim", "trace", "cluster", "eval", "forecast", "routes", "assignment"};

struct Trace {
  EventLog log;
  std::vector<int> communities;  // known corridor membership when simulated
};

Trace load_trace(const Context& ctx) {
  const bool has_sim = ctx.cfg.contains("sim"), has_trace = ctx.cfg.contains("trace");
  if (has_sim == has_trace) throw ConfigError("config needs exactly one of 'sim' or 'trace'");
  Trace t;
  if (has_sim) {
    const auto sc = mobsim::sim_config_from_json(ctx.cfg.at("sim"));
    t.log = mobsim::simulate(sc, mobsim::generate_topology(sc));
    t.communities = mobsim::corridor_membership(sc);
    return t;
  }
  const auto& j = ctx.cfg.at("trace");
  allow_keys(j, {"stations", "events", "epoch", "end_s"}, "trace");
  auto stations = telemetry::ingest_stations(ctx.resolve(get_req<std::string>(j, "stations", "trace")));
  telemetry::IngestOptions opt;
  opt.epoch = mobsim::parse_datetime(get_or<std::string>(j, "epoch", "1970-01-01"));
  if (j.contains("end_s")) opt.end_s = get_or<std::int64_t>(j, "end_s", 0);
  t.log = telemetry::ingest_events(ctx.resolve(get_req<std::string>(j, "events", "trace")), std::move(stations), opt);
  return t;
}

std::int64_t seconds_from_epoch(const EventLog& log, const std::string& datetime) {
  return (mobsim::parse_datetime(datetime) - log.epoch).count();
}

clustering::ClusterOptions cluster_options(const json& j) {
  clustering::ClusterOptions o;
  o.kmeans.restarts = get_or<std::size_t>(j, "restarts", o.kmeans.restarts);
  o.kmeans.max_iter = get_or<std::size_t>(j, "max_iter", o.kmeans.max_iter);
  if (j.contains("min_size") || j.contains("max_size")) {
    o.bounds = clustering::SizeBounds{get_req<std::size_t>(j, "min_size", "cluster"),
                                      get_req<std::size_t>(j, "max_size", "cluster")};
  }
  return o;
}

const std::set<std::string> kClusterKeys = {"n_clusters", "strategy", "window_start_s", "window_len_s", "window_start",
                                            "window_end", "min_size", "max_size", "restarts", "max_iter"};

// Handover window from either seconds or datetimes; defaults to the whole log.
std::pair<std::int64_t, std::int64_t> cluster_window(const json& j, const EventLog& log) {
  std::int64_t start = get_or<std::int64_t>(j, "window_start_s", 0);
  if (j.contains("window_start")) start = seconds_from_epoch(log, get_or<std::string>(j, "window_start", ""));
  std::int64_t len = get_or<std::int64_t>(j, "window_len_s", log.end_s - start);
  if (j.contains("window_end")) len = seconds_from_epoch(log, get_or<std::string>(j, "window_end", "")) - start;
  if (len <= 0) throw ConfigError("cluster window must have positive length");
  return {start, len};
}

clustering::ClusterAssignment compute_assignment(const json& j, const EventLog& log, std::uint64_t seed,
                                                 clustering::GraphArtifacts* artifacts = nullptr) {
  allow_keys(j, kClusterKeys, "cluster");
  const auto n_c = get_req<std::size_t>(j, "n_clusters", "cluster");
  const auto strategy = clustering::parse_strategy(get_or<std::string>(j, "strategy", "data-driven"));
  const auto opts = cluster_options(j);
  if (strategy == clustering::Strategy::geographic) return clustering::cluster_geographic(log.stations, n_c, seed, opts);
  const auto [start, len] = cluster_window(j, log);
  return clustering::cluster_data_driven(telemetry::count_handovers(log, start, len), n_c, seed, opts, artifacts);
}

// Station groups for forecasting: an assignment file, a clustering section,
// or every station in one group.
clustering::ClusterAssignment forecast_groups(const Context& ctx, const EventLog& log) {
  if (ctx.cfg.contains("assignment")) {
    std::ifstream in(ctx.resolve(ctx.cfg.at("assignment").get<std::string>()));
    if (!in) throw ConfigError("cannot open assignment file");
    clustering::ClusterAssignment a;
    try {
      a = clustering::assignment_from_json(json::parse(in));
    } catch (const json::exception& e) {
      throw ConfigError(std::string("malformed assignment: ") + e.what());
    }
    if (a.labels.size() != log.stations.size()) throw ConfigError("assignment does not match the station count");
    return a;
  }
  if (ctx.cfg.contains("cluster")) return compute_assignment(ctx.cfg.at("cluster"), log, ctx.seed);
  clustering::ClusterAssignment a;
  a.labels.assign(log.stations.size(), 0);
  a.n_clusters = 1;
  a.min_size = a.max_size = log.stations.size();
  a.strategy = clustering::Strategy::geographic;
  return a;
}

forecast::HourMapping hour_mapping(const json& j) {
  forecast::HourMapping h;
  if (!j.contains("hours")) return h;
  const auto& hj = j.at("hours");
  allow_keys(hj, {"first_hour", "n_hours"}, "hours");
  h.first_hour = get_or<int>(hj, "first_hour", h.first_hour);
  h.n_hours = get_or<int>(hj, "n_hours", h.n_hours);
  return h;
}

forecast::SplitSpec split_spec(const json& j) {
  const auto period = [&](const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("forecast requires '") + key + "'");
    const auto& p = j.at(key);
    allow_keys(p, {"start", "end"}, key);
    return std::pair{mobsim::parse_datetime(get_req<std::string>(p, "start", key)),
                     mobsim::parse_datetime(get_req<std::string>(p, "end", key))};
  };
  forecast::SplitSpec s;
  std::tie(s.train_start, s.train_end) = period("train");
  if (j.contains("test")) std::tie(s.test_start, s.test_end) = period("test");
  else s.test_start = s.test_end = s.train_end;
  return s;
}

std::string matrix_csv(const Eigen::MatrixXd& M) {
  std::ostringstream out;
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) out << (c ? "," : "") << csv::format_double(M(r, c));
    out << "\n";
  }
  return out.str();
}

// --- subcommands -----------------------------------------------------------

void cmd_simulate(Context& ctx, std::optional<std::uint64_t> seed_flag) {
  if (!ctx.cfg.contains("sim")) throw ConfigError("simulate requires a 'sim' section");
  json sim = ctx.cfg.at("sim");
  if (seed_flag) sim["seed"] = *seed_flag;
  else if (!sim.contains("seed") && ctx.cfg.contains("seed")) sim["seed"] = ctx.cfg.at("seed");
  if (!sim.is_object() || !sim.contains("seed")) throw ConfigError("simulate requires a seed");
  const auto sc = mobsim::sim_config_from_json(sim);
  ctx.seed = sc.seed;
  const auto stations = mobsim::generate_topology(sc);
  const auto log = mobsim::simulate(sc, stations);

  std::ostringstream st, ev;
  telemetry::write_stations(st, stations);
  telemetry::write_events(ev, log.events);
  ctx.emit("stations.csv", st.str());
  ctx.emit("events.csv", ev.str());
  ctx.emit("sim_config.json", mobsim::to_json(sc).dump(2) + "\n");
}

void cmd_cluster(Context& ctx) {
  if (!ctx.cfg.contains("cluster")) throw ConfigError("cluster requires a 'cluster' section");
  const auto trace = load_trace(ctx);
  clustering::GraphArtifacts art;
  const auto a = compute_assignment(ctx.cfg.at("cluster"), trace.log, ctx.seed, &art);
  ctx.emit("assignment.json", clustering::to_json(a).dump(2) + "\n");
  if (a.strategy == clustering::Strategy::data_driven) {
    ctx.emit("transition.csv", matrix_csv(art.H));
    ctx.emit("weights.csv", matrix_csv(art.W));
    ctx.emit("laplacian.csv", matrix_csv(art.laplacian.L));
    ctx.emit("embedding.csv", matrix_csv(art.embedding.U));
    ctx.emit("eigenvalues.csv", matrix_csv(art.embedding.eigenvalues));
  }
  if (!trace.communities.empty()) {
    std::ostringstream out;
    out << "station,label,corridor\n";
    for (std::size_t i = 0; i < a.labels.size(); ++i) out << i << "," << a.labels[i] << "," << trace.communities[i] << "\n";
    ctx.emit("labels.csv", out.str());
  }
}

void cmd_eval_clusters(Context& ctx) {
  if (!ctx.cfg.contains("eval")) throw ConfigError("eval-clusters requires an 'eval' section");
  const auto& j = ctx.cfg.at("eval");
  allow_keys(j, {"cluster_counts", "strategies", "period_s", "score_bin_s", "n_seeds", "restarts", "max_iter",
                 "datacenter"},
             "eval");
  const auto trace = load_trace(ctx);
  const auto counts = get_req<std::vector<std::size_t>>(j, "cluster_counts", "eval");
  const auto period = get_or<std::int64_t>(j, "period_s", 86400);
  const auto n_seeds = get_or<std::size_t>(j, "n_seeds", 5);
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < n_seeds; ++i) seeds.push_back(sub_seed(ctx.seed, static_cast<std::uint64_t>(i)));
  eval::PeriodicOptions po;
  po.score_bin_s = get_or<std::int64_t>(j, "score_bin_s", 0);
  po.cluster.kmeans.restarts = get_or<std::size_t>(j, "restarts", po.cluster.kmeans.restarts);
  po.cluster.kmeans.max_iter = get_or<std::size_t>(j, "max_iter", po.cluster.kmeans.max_iter);

  std::vector<eval::RatioRow> rows;
  for (const auto& name : get_or<std::vector<std::string>>(j, "strategies", {"data-driven", "geographic"})) {
    const auto strategy = clustering::parse_strategy(name);
    const auto r = eval::ratio_vs_clusters(trace.log, strategy, counts, period, seeds, po);
    rows.insert(rows.end(), r.begin(), r.end());
    for (auto k : counts) {
      const auto p = eval::evaluate_periodic(trace.log, strategy, k, period, seeds.front(), po);
      std::ostringstream out;
      eval::write_ratio_points(out, p.points);
      ctx.emit("ratio_points_" + name + "_k" + std::to_string(k) + ".csv", out.str());
    }
  }
  std::ostringstream table;
  eval::write_ratio_table(table, rows);
  ctx.emit("ratio_table.csv", table.str());

  if (j.contains("datacenter")) {
    const auto& d = j.at("datacenter");
    allow_keys(d, {"lat", "lon"}, "datacenter");
    const auto report = eval::propagation_delay(
        trace.log.stations, {get_req<double>(d, "lat", "datacenter"), get_req<double>(d, "lon", "datacenter")});
    std::ostringstream out;
    eval::write_delays(out, report);
    ctx.emit("delays.csv", out.str());
  }
}

const std::set<std::string> kForecastKeys = {"bin_s",  "hours", "lookaheads", "windows",       "window_mode",
                                             "methods", "scopes", "clusters",  "train",         "test",
                                             "folds",  "full_rfr_grid", "rfr_trees", "weekday_flag"};

void cmd_forecast(Context& ctx) {
  if (!ctx.cfg.contains("forecast")) throw ConfigError("forecast requires a 'forecast' section");
  const auto& j = ctx.cfg.at("forecast");
  allow_keys(j, kForecastKeys, "forecast");
  const auto trace = load_trace(ctx);
  const auto groups = forecast_groups(ctx, trace.log);
  const auto bin_s = get_or<std::int64_t>(j, "bin_s", 300);

  forecast::ExperimentConfig ec;
  ec.hours = hour_mapping(j);
  ec.lookaheads = get_or(j, "lookaheads", ec.lookaheads);
  ec.windows = get_or(j, "windows", ec.windows);
  const auto mode = get_or<std::string>(j, "window_mode", "each");
  if (mode != "each" && mode != "cv") throw ConfigError("window_mode must be 'each' or 'cv'");
  ec.window_mode = mode == "cv" ? forecast::WindowMode::cv : forecast::WindowMode::each;
  if (j.contains("methods")) {
    ec.methods.clear();
    for (const auto& m : get_or<std::vector<std::string>>(j, "methods", {})) ec.methods.push_back(forecast::parse_method(m));
  }
  if (j.contains("scopes")) {
    ec.scopes.clear();
    for (const auto& s : get_or<std::vector<std::string>>(j, "scopes", {})) {
      if (s == "local") ec.scopes.push_back(forecast::Scope::local);
      else if (s == "cluster") ec.scopes.push_back(forecast::Scope::cluster);
      else throw ConfigError("scope must be 'local' or 'cluster'");
    }
  }
  ec.clusters = get_or(j, "clusters", ec.clusters);
  ec.split = split_spec(j);
  ec.folds = get_or(j, "folds", ec.folds);
  ec.grid.full_rfr_grid = get_or(j, "full_rfr_grid", false);
  ec.grid.rfr_trees = get_or<std::size_t>(j, "rfr_trees", 200);
  ec.weekday_flag = get_or(j, "weekday_flag", true);
  ec.seed = ctx.seed;

  const auto series = telemetry::bin_user_counts(trace.log, bin_s);
  forecast::FitAudit audit;
  const auto report = forecast::run_experiment(series, groups, trace.log.epoch, bin_s, ec, &audit);
  std::ostringstream out;
  forecast::write_report_csv(out, report);
  ctx.emit("report.csv", out.str());
  ctx.emit("hyperparameters.json", forecast::hyperparameters_json(report).dump(2) + "\n");
}

void cmd_rank_routes(Context& ctx) {
  if (!ctx.cfg.contains("routes")) throw ConfigError("rank-routes requires a 'routes' section");
  const auto& j = ctx.cfg.at("routes");
  allow_keys(j, {"file", "list", "departures", "metric", "s_min_mbps", "window", "max_lag", "method", "bin_s", "hours",
                 "train", "full_rfr_grid", "rfr_trees"},
             "routes");
  const auto trace = load_trace(ctx);
  const auto& log = trace.log;
  std::vector<route::Route> routes;
  if (j.contains("file") == j.contains("list")) throw ConfigError("routes needs exactly one of 'file' or 'list'");
  routes = j.contains("file") ? route::read_routes(ctx.resolve(j.at("file").get<std::string>()))
                              : route::routes_from_json(j.at("list"));
  const auto departures = get_req<std::vector<std::string>>(j, "departures", "routes");
  if (departures.empty()) throw ConfigError("routes needs at least one departure");
  const auto metric = route::parse_rank_metric(get_or<std::string>(j, "metric", "S_hat"));

  route::RouteOptions ro;
  ro.bin_s = get_or<std::int64_t>(j, "bin_s", 300);
  ro.max_lag = get_or<std::size_t>(j, "max_lag", 9);
  ro.s_min_mbps = get_or(j, "s_min_mbps", ro.s_min_mbps);
  const auto window = get_or<std::size_t>(j, "window", 2);
  const auto method = forecast::parse_method(get_or<std::string>(j, "method", "GPR"));
  forecast::GridOptions go;
  go.full_rfr_grid = get_or(j, "full_rfr_grid", false);
  go.rfr_trees = get_or<std::size_t>(j, "rfr_trees", 200);
  const auto split = split_spec(j);
  const forecast::Calendar cal(log.epoch, ro.bin_s, hour_mapping(j));

  const auto groups = forecast_groups(ctx, log);
  const auto series = telemetry::bin_user_counts(log, ro.bin_s);
  std::set<int> needed;
  for (const auto& r : routes) {
    for (const auto& l : r.legs) {
      if (l.station.index() >= log.stations.size()) throw ConfigError("route references unknown station");
      needed.insert(groups.labels[l.station.index()]);
    }
  }
  forecast::FitAudit audit;
  std::map<int, forecast::GroupForecaster> models;
  for (int g : needed) {
    std::vector<const StationSeries*> members;
    for (auto id : groups.members(g)) members.push_back(&series[id.index()]);
    models.emplace(g, forecast::GroupForecaster(members, cal, window, ro.max_lag, forecast::default_grid(method, go),
                                                split, sub_seed(ctx.seed, static_cast<std::uint64_t>(g)), &audit));
  }
  const route::Predictor predictor = [&](StationId s, std::int64_t origin, std::size_t lag) {
    return models.at(groups.labels[s.index()]).predict(s, origin, lag);
  };

  std::ostringstream out;
  route::write_ranking_header(out);
  for (const auto& d : departures) {
    const auto dep = seconds_from_epoch(log, d);
    const auto ranking = route::rank_routes(routes, dep, predictor, log.stations, metric, ro);
    route::write_ranking(out, mobsim::format_datetime(mobsim::parse_datetime(d)), ranking);
  }
  ctx.emit("ranking.csv", out.str());
}

}  // namespace

RunResult run(const RunOptions& options) {
  Context ctx;
  {
    std::ifstream in(options.config, std::ios::binary);
    if (!in) throw ConfigError("cannot open config " + options.config.string());
    ctx.raw.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  try {
    ctx.cfg = json::parse(ctx.raw);
  } catch (const json::parse_error& e) {
    throw ConfigError(options.config.string() + ": " + e.what());
  }
  allow_keys(ctx.cfg, kTopKeys, "config");
  ctx.base = options.config.parent_path();
  ctx.out = options.out_dir;
  fs::create_directories(ctx.out);

  const auto& cmd = options.command;
  if (cmd != "simulate") {
    if (options.seed) ctx.seed = *options.seed;
    else if (ctx.cfg.contains("seed")) ctx.seed = get_or<std::uint64_t>(ctx.cfg, "seed", 0);
    else throw ConfigError(cmd + " requires a seed (--seed or 'seed' in the config)");
  }

  try {
    if (cmd == "simulate") cmd_simulate(ctx, options.seed);
    else if (cmd == "cluster") cmd_cluster(ctx);
    else if (cmd == "eval-clusters") cmd_eval_clusters(ctx);
    else if (cmd == "forecast") cmd_forecast(ctx);
    else if (cmd == "rank-routes") cmd_rank_routes(ctx);
    else throw ConfigError("unknown subcommand '" + cmd + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  Manifest m;
  m.command = cmd;
  m.config_sha256 = sha256_hex(ctx.raw);
  m.seed = ctx.seed;
  m.outputs = ctx.outputs;
  RunResult result;
  result.outputs = ctx.outputs;
  result.manifest = ctx.out / "manifest.json";
  write_manifest(result.manifest, m);
  return result;
}

int exit_code(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->category()) {
      case ErrorCategory::config: return 1;
      case ErrorCategory::data: return 2;
      case ErrorCategory::numerical: return 3;
    }
  }
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return 2;
  return 2;
}

int main(int argc, char** argv) {
  CLI::App app{"edgemind: RAN controller clustering and load forecasting on handover traces"};
  app.require_subcommand(1);
  RunOptions opt;
  std::uint64_t seed = 0;
  for (const char* name : {"simulate", "cluster", "eval-clusters", "forecast", "rank-routes"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config, "JSON config file")->required();
    sub->add_option("--seed", seed, "seed override");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->callback([&opt, &seed, sub, name] {
      opt.command = name;
      if (sub->count("--seed")) opt.seed = seed;
    });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  try {
    const auto result = run(opt);
    std::cout << "wrote " << result.outputs.size() << " files and " << result.manifest.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "edgemind " << opt.command << ": " << e.what() << "\n";
    return exit_code(e);
  }
}

}  // namespace edgemind::cli
