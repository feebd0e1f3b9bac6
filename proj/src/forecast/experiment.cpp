#include "edgemind/forecast/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <ostream>
#include <tuple>

#include "edgemind/common/csv.hpp"
#include "edgemind/common/errors.hpp"
#include "edgemind/common/rng.hpp"
#include "edgemind/forecast/arma.hpp"
#include "edgemind/forecast/cv.hpp"
#include "edgemind/forecast/metrics.hpp"

namespace edgemind::forecast {

std::string to_string(Scope s) { return s == Scope::local ? "local" : "cluster"; }

const ReportCell* ForecastReport::find(Method m, Scope s, int cluster, std::size_t lookahead,
                                       std::optional<std::size_t> window) const {
  for (const auto& c : cells) {
    if (c.method == m && c.scope == s && c.cluster == cluster && c.lookahead == lookahead &&
        (!window || c.window == *window)) {
      return &c;
    }
  }
  return nullptr;
}

namespace {

struct Split {
  DesignMatrix train;
  DesignMatrix test;
};

Split split_rows(DesignMatrix dm, const Calendar& cal, const SplitSpec& spec) {
  tag_split(dm, cal, spec);
  const auto tr = dm.rows_with(RowSplit::train);
  const auto te = dm.rows_with(RowSplit::test);
  if (tr.empty()) throw InsufficientData("no training rows inside the training period");
  if (te.empty()) throw InsufficientData("no test rows inside the test period");
  return {dm.take(tr), dm.take(te)};
}

std::uint64_t cell_seed(std::uint64_t seed, Method m, Scope s, int cluster, std::size_t L, std::size_t W,
                        std::uint32_t station) {
  const std::string key = to_string(m) + "/" + to_string(s) + "/" + std::to_string(cluster) + "/" + std::to_string(L) +
                          "/" + std::to_string(W) + "/" + std::to_string(station);
  return sub_seed(seed, key);
}

// Result of fitting one regressor on one design matrix.
struct Fit {
  Eigen::VectorXd sigma;
  ModelSpec chosen;
  double cv_score = 0.0;
  std::vector<double> cv_scores;
};

Fit fit_regressor(Method method, const Split& s, const Transform& t, const ExperimentConfig& cfg, bool score,
                  std::uint64_t seed, FitAudit* audit) {
  TrainingData td(t.apply_x(s.train.X), t.apply_y(s.train.Y), seed);
  const auto grid = default_grid(method, cfg.grid);
  const CvResult cv = cv_select(grid, td, t, s.train.split, cfg.folds, audit, score);
  if (audit) audit->observe("fit:" + to_string(method), s.train.split);
  const Eigen::MatrixXd pred = t.inverse_y(td.predict(cv.best, t.apply_x(s.test.X)));
  Fit f;
  f.sigma = column_rmse(s.test.Y, pred);
  f.chosen = cv.best;
  f.cv_scores = cv.scores;
  if (!cv.scores.empty()) f.cv_score = cv.scores[cv.best_index];
  if (!f.sigma.allFinite()) throw ConvergenceError(to_string(method) + " produced non-finite predictions");
  return f;
}

std::size_t position_of(const StationSeries& s, std::int64_t bin) {
  const auto it = std::lower_bound(s.values.begin(), s.values.end(), bin,
                                   [](const SeriesPoint& p, std::int64_t b) { return p.bin < b; });
  if (it == s.values.end() || it->bin != bin) throw AlignmentError("bin missing from series");
  return static_cast<std::size_t>(it - s.values.begin());
}

bool continues_run(const StationSeries& s, const Calendar& cal, std::size_t p) {
  if (p == 0) return false;
  const auto a = cal.at(s.values[p - 1].bin), b = cal.at(s.values[p].bin);
  return a.h && b.h && a.day == b.day && s.values[p].bin == s.values[p - 1].bin + 1;
}

// Contiguous mapped-hour stretches lying wholly inside [from, to).
std::vector<std::vector<double>> train_segments(const StationSeries& s, const Calendar& cal, TimePoint from,
                                                TimePoint to) {
  std::vector<std::vector<double>> out;
  const auto bin = std::chrono::seconds{cal.bin_s()};
  for (std::size_t p = 0; p < s.values.size(); ++p) {
    const auto info = cal.at(s.values[p].bin);
    const auto start = cal.start_of(s.values[p].bin);
    if (!info.h || start < from || start + bin > to) continue;
    if (out.empty() || !continues_run(s, cal, p) || cal.start_of(s.values[p - 1].bin) < from) out.emplace_back();
    out.back().push_back(static_cast<double>(s.values[p].n_ue));
  }
  return out;
}

// ARMA on the rows of a local design matrix; history is the run up to t.
Eigen::VectorXd arma_sigma(const StationSeries& s, const Calendar& cal, const Split& split, const SplitSpec& period,
                           FitAudit* audit, bool& persistence) {
  const auto segments = train_segments(s, cal, period.train_start, period.train_end);
  if (audit) {
    std::size_t n = 0;
    for (const auto& seg : segments) n += seg.size();
    const std::vector<RowSplit> tags(n, RowSplit::train);
    audit->observe("fit:ARMA", tags);
  }
  const ArmaModel model = arma_fit(segments);
  persistence = model.persistence;
  const auto& test = split.test;
  Eigen::VectorXd pred(static_cast<Eigen::Index>(test.rows()));
  std::vector<double> history;
  for (std::size_t r = 0; r < test.rows(); ++r) {
    std::size_t p = position_of(s, test.feature_bin[r]);
    const std::size_t end = p + 1;
    while (continues_run(s, cal, p)) --p;
    history.clear();
    for (std::size_t q = p; q < end; ++q) history.push_back(static_cast<double>(s.values[q].n_ue));
    pred(static_cast<Eigen::Index>(r)) = arma_forecast(model, history, test.lookahead);
  }
  return column_rmse(test.Y, pred);
}

using GroupKey = std::tuple<int, int, int, std::size_t>;  // method, scope, cluster, L

}  // namespace

ForecastReport run_experiment(const std::vector<StationSeries>& series, const clustering::ClusterAssignment& assignment,
                              const TimePoint& epoch, std::int64_t bin_s, const ExperimentConfig& config,
                              FitAudit* audit) {
  if (series.size() != assignment.labels.size()) throw ShapeError("series and assignment differ in station count");
  if (config.lookaheads.empty() || config.windows.empty() || config.methods.empty() || config.scopes.empty()) {
    throw ConfigError("experiment grid has an empty axis");
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].station.index() != i) throw ShapeError("series must be indexed by station id");
  }
  const Calendar cal(epoch, bin_s, config.hours);
  std::vector<int> clusters = config.clusters;
  if (clusters.empty()) {
    for (std::size_t c = 0; c < assignment.n_clusters; ++c) clusters.push_back(static_cast<int>(c));
  }
  const bool score = config.window_mode == WindowMode::cv;

  ForecastReport report;
  std::map<GroupKey, std::vector<std::pair<double, std::size_t>>> candidates;  // (score, cell index)

  for (int c : clusters) {
    const auto ids = assignment.members(c);
    if (ids.empty()) throw ConfigError("cluster " + std::to_string(c) + " has no stations");
    std::vector<StationSeries> members;
    for (auto id : ids) members.push_back(series[id.index()]);

    for (std::size_t L : config.lookaheads) {
      for (std::size_t W : config.windows) {
        const FeatureSpec fs{W, L, config.weekday_flag};
        for (Scope scope : config.scopes) {
          // One design matrix per fitted unit: the whole cluster, or each station.
          std::vector<std::vector<std::size_t>> units;
          if (scope == Scope::cluster) {
            units.emplace_back();
            for (std::size_t m = 0; m < members.size(); ++m) units.back().push_back(m);
          } else {
            for (std::size_t m = 0; m < members.size(); ++m) units.push_back({m});
          }
          std::vector<Split> splits;
          std::vector<Transform> transforms;
          for (const auto& u : units) {
            std::vector<StationSeries> sub;
            for (auto m : u) sub.push_back(members[m]);
            splits.push_back(split_rows(build_cluster(sub, cal, fs), cal, config.split));
            transforms.push_back(fit_transform(splits.back().train, audit));
          }

          for (Method method : config.methods) {
            if (method == Method::arma && scope == Scope::cluster) continue;
            ReportCell cell;
            cell.method = method;
            cell.scope = scope;
            cell.cluster = c;
            cell.lookahead = L;
            cell.window = W;
            cell.stations = ids;
            cell.sigma_b.assign(ids.size(), 0.0);
            double score_sum = 0.0;
            for (std::size_t u = 0; u < units.size(); ++u) {
              const auto& sp = splits[u];
              cell.train_rows = sp.train.rows();
              cell.test_rows = sp.test.rows();
              for (auto d : transforms[u].degenerate_x()) cell.degenerate_features.push_back(d);
              if (method == Method::arma) {
                bool persistence = false;
                const auto sig = arma_sigma(members[units[u][0]], cal, sp, config.split, audit, persistence);
                cell.sigma_b[units[u][0]] = sig(0);
                cell.arma_persistence = cell.arma_persistence || persistence;
                cell.chosen.push_back(default_grid(Method::arma).front());
                continue;
              }
              const auto seed = cell_seed(config.seed, method, scope, c, L, W,
                                          scope == Scope::local ? ids[units[u][0]].value : 0);
              const Fit f = fit_regressor(method, sp, transforms[u], config, score, seed, audit);
              for (std::size_t k = 0; k < units[u].size(); ++k) {
                cell.sigma_b[units[u][k]] = f.sigma(static_cast<Eigen::Index>(k));
              }
              cell.chosen.push_back(f.chosen);
              cell.cv_scores.insert(cell.cv_scores.end(), f.cv_scores.begin(), f.cv_scores.end());
              score_sum += f.cv_score;
            }
            std::sort(cell.degenerate_features.begin(), cell.degenerate_features.end());
            cell.degenerate_features.erase(
                std::unique(cell.degenerate_features.begin(), cell.degenerate_features.end()),
                cell.degenerate_features.end());
            cell.sigma_hat = aggregate(cell.sigma_b);
            const GroupKey key{static_cast<int>(method), static_cast<int>(scope), c, L};
            candidates[key].emplace_back(score_sum / static_cast<double>(units.size()), report.cells.size());
            report.cells.push_back(std::move(cell));
          }
        }
      }
    }
  }

  if (config.window_mode == WindowMode::cv) {
    // Keep the lowest-scoring W per group; ties keep the earlier W. ARMA has
    // no CV score and keeps the first W.
    std::vector<bool> keep(report.cells.size(), false);
    for (const auto& [key, list] : candidates) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < list.size(); ++i) {
        if (list[i].first < list[best].first) best = i;
      }
      keep[list[best].second] = true;
    }
    std::vector<ReportCell> kept;
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
      if (keep[i]) kept.push_back(std::move(report.cells[i]));
    }
    report.cells = std::move(kept);
  }

  std::stable_sort(report.cells.begin(), report.cells.end(), [](const ReportCell& a, const ReportCell& b) {
    return std::tuple(static_cast<int>(a.method), static_cast<int>(a.scope), a.cluster, a.lookahead, a.window) <
           std::tuple(static_cast<int>(b.method), static_cast<int>(b.scope), b.cluster, b.lookahead, b.window);
  });
  if (audit) {
    report.fits = audit->fits();
    report.test_rows_in_fits = audit->test_rows_seen();
  }
  return report;
}

void write_report_csv(std::ostream& out, const ForecastReport& report) {
  out << "method,scope,cluster,L,W,station,sigma_b\n";
  for (const auto& c : report.cells) {
    const std::string prefix = to_string(c.method) + "," + to_string(c.scope) + "," + std::to_string(c.cluster) + "," +
                               std::to_string(c.lookahead) + "," + std::to_string(c.window) + ",";
    for (std::size_t i = 0; i < c.stations.size(); ++i) {
      out << prefix << c.stations[i].value << "," << csv::format_double(c.sigma_b[i]) << "\n";
    }
    out << prefix << "mean," << csv::format_double(c.sigma_hat) << "\n";
  }
}

nlohmann::json hyperparameters_json(const ForecastReport& report) {
  auto cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    nlohmann::json j;
    j["method"] = to_string(c.method);
    j["scope"] = to_string(c.scope);
    j["cluster"] = c.cluster;
    j["L"] = c.lookahead;
    j["W"] = c.window;
    auto stations = nlohmann::json::array();
    for (auto s : c.stations) stations.push_back(s.value);
    j["stations"] = stations;
    auto chosen = nlohmann::json::array();
    for (const auto& spec : c.chosen) {
      nlohmann::json p = nlohmann::json::object();
      for (const auto& [k, v] : spec.params) p[k] = v;
      chosen.push_back(p);
    }
    j["chosen"] = chosen;
    j["train_rows"] = c.train_rows;
    j["test_rows"] = c.test_rows;
    j["degenerate_features"] = c.degenerate_features;
    if (c.method == Method::arma) j["persistence_fallback"] = c.arma_persistence;
    cells.push_back(std::move(j));
  }
  return {{"cells", cells}, {"fits", report.fits}, {"test_rows_in_fits", report.test_rows_in_fits}};
}

GroupForecaster::GroupForecaster(std::vector<const StationSeries*> members, const Calendar& calendar,
                                 std::size_t window, std::size_t max_lookahead, const std::vector<ModelSpec>& grid,
                                 const SplitSpec& split, std::uint64_t seed, FitAudit* audit)
    : calendar_(calendar) {
  if (members.empty()) throw ConfigError("forecaster needs at least one station");
  if (grid.empty()) throw ConfigError("forecaster needs a hyperparameter grid");
  if (grid.front().method == Method::arma) throw ConfigError("route forecasting supports BRR, GPR and RFR");
  for (const auto* m : members) members_.push_back(*m);
  spec_ = FeatureSpec{window, 1, true};
  for (std::size_t L = 1; L <= max_lookahead; ++L) {
    const FeatureSpec fs{window, L, true};
    DesignMatrix dm = build_cluster(members_, calendar_, fs);
    tag_split(dm, calendar_, split);
    const auto rows = dm.rows_with(RowSplit::train);
    if (rows.empty()) throw InsufficientData("no training rows for lag " + std::to_string(L));
    const DesignMatrix train = dm.take(rows);
    Transform t = fit_transform(train, audit);
    TrainingData td(t.apply_x(train.X), t.apply_y(train.Y), sub_seed(seed, static_cast<std::uint64_t>(L)));
    const CvResult cv = cv_select(grid, td, t, train.split, 3, audit);
    if (audit) audit->observe("fit:" + to_string(cv.best.method), train.split);
    models_.push_back({t, FittedModel::fit(cv.best, td.X(), td.Y(), sub_seed(seed, static_cast<std::uint64_t>(L)))});
  }
}

std::optional<double> GroupForecaster::predict(StationId station, std::int64_t origin_bin, std::size_t lookahead) const {
  if (lookahead < 1 || lookahead > models_.size()) return std::nullopt;
  std::size_t col = members_.size();
  for (std::size_t m = 0; m < members_.size(); ++m) {
    if (members_[m].station == station) col = m;
  }
  if (col == members_.size()) return std::nullopt;
  Eigen::RowVectorXd row;
  if (!feature_row(members_, calendar_, spec_, origin_bin, row)) return std::nullopt;
  const auto& lag = models_[lookahead - 1];
  const Eigen::MatrixXd x = lag.transform.apply_x(row);
  const Eigen::MatrixXd y = lag.transform.inverse_y(lag.model.predict(x));
  return std::max(0.0, y(0, static_cast<Eigen::Index>(col)));
}

}  // namespace edgemind::forecast
