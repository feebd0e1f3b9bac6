#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edgemind/clustering/assignment.hpp"
#include "edgemind/forecast/calendar.hpp"
#include "edgemind/forecast/features.hpp"
#include "edgemind/forecast/models.hpp"
#include "edgemind/forecast/transform.hpp"
#include "edgemind/telemetry/types.hpp"

namespace edgemind::forecast {

enum class Scope { local, cluster };
std::string to_string(Scope s);

enum class WindowMode {
  each,  // one report cell per W in the grid
  cv,    // W chosen per (method, scope, L) by the CV score
};

struct ExperimentConfig {
  HourMapping hours;
  std::vector<std::size_t> lookaheads{1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<std::size_t> windows{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  WindowMode window_mode = WindowMode::each;
  std::vector<Method> methods{Method::brr, Method::gpr, Method::rfr, Method::arma};
  std::vector<Scope> scopes{Scope::local, Scope::cluster};
  std::vector<int> clusters;  // empty = every cluster
  SplitSpec split;
  std::size_t folds = 3;
  GridOptions grid;
  bool weekday_flag = true;
  std::uint64_t seed = 0;
};

// One evaluated (method, scope, cluster, L, W) combination.
struct ReportCell {
  Method method = Method::brr;
  Scope scope = Scope::local;
  int cluster = 0;
  std::size_t lookahead = 0;
  std::size_t window = 0;
  std::vector<StationId> stations;
  std::vector<double> sigma_b;
  double sigma_hat = 0.0;
  std::size_t train_rows = 0;  // per station for local scope
  std::size_t test_rows = 0;
  // Chosen grid point per fitted model: one for cluster scope, one per
  // station for local scope.
  std::vector<ModelSpec> chosen;
  std::vector<double> cv_scores;  // of the winning W in cv mode
  std::vector<std::size_t> degenerate_features;
  bool arma_persistence = false;
};

struct ForecastReport {
  std::vector<ReportCell> cells;
  std::size_t fits = 0;
  std::size_t test_rows_in_fits = 0;

  // Cell lookup; nullptr when absent.
  const ReportCell* find(Method m, Scope s, int cluster, std::size_t lookahead,
                         std::optional<std::size_t> window = std::nullopt) const;
};

// `series` is indexed by station id and aligned on common bins. Every fit,
// including transforms and CV, is reported to `audit`.
ForecastReport run_experiment(const std::vector<StationSeries>& series, const clustering::ClusterAssignment& assignment,
                              const TimePoint& epoch, std::int64_t bin_s, const ExperimentConfig& config,
                              FitAudit* audit = nullptr);

// `method,scope,cluster,L,W,station,sigma_b`; the per-cell sigma-hat rows use
// station "mean".
void write_report_csv(std::ostream& out, const ForecastReport& report);
nlohmann::json hyperparameters_json(const ForecastReport& report);

// Trained direct multi-step predictor for one station group, used by route
// ranking: one cluster-scope model per lag 1..max_lookahead, each fitted on
// the train rows of `split` with its grid point chosen by CV. predict()
// returns nullopt when the lag is not trained or the history window at
// `origin_bin` is incomplete.
class GroupForecaster {
 public:
  GroupForecaster(std::vector<const StationSeries*> members, const Calendar& calendar, std::size_t window,
                  std::size_t max_lookahead, const std::vector<ModelSpec>& grid, const SplitSpec& split, std::uint64_t seed,
                  FitAudit* audit = nullptr);

  std::optional<double> predict(StationId station, std::int64_t origin_bin, std::size_t lookahead) const;
  std::size_t max_lookahead() const { return models_.size(); }
  const std::vector<StationSeries>& members() const { return members_; }

 private:
  struct Lag {
    Transform transform;
    FittedModel model;
  };
  std::vector<StationSeries> members_;
  Calendar calendar_;
  FeatureSpec spec_;
  std::vector<Lag> models_;
};

}  // namespace edgemind::forecast
