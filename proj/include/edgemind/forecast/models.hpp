#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace edgemind::forecast {

enum class Method { brr, gpr, rfr, arma };

std::string to_string(Method m);
Method parse_method(std::string_view s);  // ConfigError on unknown names

// One grid point. Parameter names: brr {alpha, lambda}, gpr {alpha,
// sigma_k}, rfr {n_trees}, arma {p, q}.
struct ModelSpec {
  Method method = Method::brr;
  std::vector<std::pair<std::string, double>> params;

  double get(std::string_view name) const;  // ConfigError when absent
};

struct GridOptions {
  bool full_rfr_grid = false;  // {1000, 5000, 10000} trees instead of one 200-tree point
  std::size_t rfr_trees = 200;
};

std::vector<ModelSpec> default_grid(Method m, const GridOptions& options = {});

// Scaled training data with a lazily cached GPR base kernel so CV folds,
// which are row prefixes, reuse one kernel evaluation.
class TrainingData {
 public:
  TrainingData(Eigen::MatrixXd X, Eigen::MatrixXd Y, std::uint64_t seed);

  const Eigen::MatrixXd& X() const { return X_; }
  const Eigen::MatrixXd& Y() const { return Y_; }
  std::size_t rows() const { return static_cast<std::size_t>(X_.rows()); }

  // Fit on rows [0, fit_rows) and predict rows [eval_begin, eval_end).
  Eigen::MatrixXd predict_rows(const ModelSpec& spec, std::size_t fit_rows, std::size_t eval_begin,
                               std::size_t eval_end);
  // Fit on every row and predict external inputs.
  Eigen::MatrixXd predict(const ModelSpec& spec, const Eigen::MatrixXd& X_eval);

 private:
  const Eigen::MatrixXd& base_kernel();

  Eigen::MatrixXd X_;
  Eigen::MatrixXd Y_;
  std::uint64_t seed_;
  std::optional<Eigen::MatrixXd> K0_;
};

// A fitted regressor over scaled inputs; ARMA is not one (see arma.hpp).
class FittedModel {
 public:
  static FittedModel fit(const ModelSpec& spec, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                         std::uint64_t seed);
  Eigen::MatrixXd predict(const Eigen::MatrixXd& X) const;
  const ModelSpec& spec() const { return spec_; }

 private:
  struct Impl;
  ModelSpec spec_;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace edgemind::forecast
