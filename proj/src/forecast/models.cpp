#include "edgemind/forecast/models.hpp"

#include <variant>

#include "edgemind/common/errors.hpp"
#include "edgemind/forecast/brr.hpp"
#include "edgemind/forecast/forest.hpp"
#include "edgemind/forecast/gpr.hpp"

namespace edgemind::forecast {

std::string to_string(Method m) {
  switch (m) {
    case Method::brr: return "BRR";
    case Method::gpr: return "GPR";
    case Method::rfr: return "RFR";
    case Method::arma: return "ARMA";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  for (Method m : {Method::brr, Method::gpr, Method::rfr, Method::arma}) {
    std::string name = to_string(m);
    std::string lower = name;
    for (auto& c : lower) c = static_cast<char>(c - 'A' + 'a');
    if (s == name || s == lower) return m;
  }
  throw ConfigError("unknown method '" + std::string(s) + "'");
}

double ModelSpec::get(std::string_view name) const {
  for (const auto& [k, v] : params) {
    if (k == name) return v;
  }
  throw ConfigError(to_string(method) + " spec lacks parameter '" + std::string(name) + "'");
}

std::vector<ModelSpec> default_grid(Method m, const GridOptions& options) {
  std::vector<ModelSpec> grid;
  switch (m) {
    case Method::brr:
      for (double a : {1e-6, 1e-3, 1.0, 10.0, 100.0}) {
        for (double l : {1e-6, 1e-3, 1.0, 10.0, 100.0}) grid.push_back({m, {{"alpha", a}, {"lambda", l}}});
      }
      break;
    case Method::gpr:
      for (double a : {1e-6, 1e-4, 1e-2, 0.1}) {
        for (double s : {0.001, 0.01}) grid.push_back({m, {{"alpha", a}, {"sigma_k", s}}});
      }
      break;
    case Method::rfr:
      if (options.full_rfr_grid) {
        for (double n : {1000.0, 5000.0, 10000.0}) grid.push_back({m, {{"n_trees", n}}});
      } else {
        grid.push_back({m, {{"n_trees", static_cast<double>(options.rfr_trees)}}});
      }
      break;
    case Method::arma:
      grid.push_back({m, {{"p", 4.0}, {"q", 2.0}}});
      break;
  }
  return grid;
}

struct FittedModel::Impl {
  std::variant<BrrModel, GprModel, ForestModel> model;
};

FittedModel FittedModel::fit(const ModelSpec& spec, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                             std::uint64_t seed) {
  FittedModel out;
  out.spec_ = spec;
  auto impl = std::make_shared<Impl>();
  switch (spec.method) {
    case Method::brr: impl->model = brr_fit(X, Y, spec.get("alpha"), spec.get("lambda")); break;
    case Method::gpr: impl->model = gpr_fit(X, Y, spec.get("alpha"), spec.get("sigma_k")); break;
    case Method::rfr: {
      ForestOptions fo;
      fo.n_trees = static_cast<std::size_t>(spec.get("n_trees"));
      fo.seed = seed;
      impl->model = rfr_fit(X, Y, fo);
      break;
    }
    case Method::arma: throw ConfigError("ARMA is fitted on series, not design matrices");
  }
  out.impl_ = std::move(impl);
  return out;
}

Eigen::MatrixXd FittedModel::predict(const Eigen::MatrixXd& X) const {
  return std::visit([&](const auto& m) { return m.predict(X); }, impl_->model);
}

TrainingData::TrainingData(Eigen::MatrixXd X, Eigen::MatrixXd Y, std::uint64_t seed)
    : X_(std::move(X)), Y_(std::move(Y)), seed_(seed) {
  if (X_.rows() != Y_.rows()) throw ShapeError("training data: X and Y row counts differ");
}

const Eigen::MatrixXd& TrainingData::base_kernel() {
  if (!K0_) K0_ = gpr_kernel_matrix(X_, X_, 0.0);
  return *K0_;
}

Eigen::MatrixXd TrainingData::predict_rows(const ModelSpec& spec, std::size_t fit_rows, std::size_t eval_begin,
                                           std::size_t eval_end) {
  if (fit_rows == 0 || fit_rows > rows() || eval_begin > eval_end || eval_end > rows()) {
    throw ShapeError("training data: row range out of bounds");
  }
  const auto nf = static_cast<Eigen::Index>(fit_rows);
  const auto eb = static_cast<Eigen::Index>(eval_begin);
  const auto ne = static_cast<Eigen::Index>(eval_end - eval_begin);
  if (spec.method == Method::gpr) {
    const auto& K0 = base_kernel();
    const double alpha = spec.get("alpha"), sigma_k = spec.get("sigma_k");
    const GprModel m = gpr_fit_with_kernel(X_.topRows(nf), K0.topLeftCorner(nf, nf), Y_.topRows(nf), alpha, sigma_k);
    Eigen::MatrixXd Ks = K0.block(eb, 0, ne, nf);
    Ks.array() += sigma_k * sigma_k;
    return Ks * m.dual;
  }
  return FittedModel::fit(spec, X_.topRows(nf), Y_.topRows(nf), seed_).predict(X_.middleRows(eb, ne));
}

Eigen::MatrixXd TrainingData::predict(const ModelSpec& spec, const Eigen::MatrixXd& X_eval) {
  if (spec.method == Method::gpr) {
    const GprModel m = gpr_fit_with_kernel(X_, base_kernel(), Y_, spec.get("alpha"), spec.get("sigma_k"));
    return m.predict(X_eval);
  }
  return FittedModel::fit(spec, X_, Y_, seed_).predict(X_eval);
}

}  // namespace edgemind::forecast
