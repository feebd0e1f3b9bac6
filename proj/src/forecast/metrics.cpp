#include "edgemind/forecast/metrics.hpp"

#include <cmath>

#include "edgemind/common/errors.hpp"

namespace edgemind::forecast {

double rmse(std::span<const double> y, std::span<const double> y_hat) {
  if (y.size() != y_hat.size()) throw ShapeError("rmse: length mismatch");
  if (y.empty()) throw ShapeError("rmse: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - y_hat[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(y.size()));
}

double rmse(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& y_hat) {
  return rmse(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())),
              std::span<const double>(y_hat.data(), static_cast<std::size_t>(y_hat.size())));
}

Eigen::VectorXd column_rmse(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Y_hat) {
  if (Y.rows() != Y_hat.rows() || Y.cols() != Y_hat.cols()) throw ShapeError("column_rmse: shape mismatch");
  Eigen::VectorXd out(Y.cols());
  for (Eigen::Index c = 0; c < Y.cols(); ++c) out(c) = rmse(Y.col(c), Y_hat.col(c));
  return out;
}

double aggregate(std::span<const double> sigma_b) {
  if (sigma_b.empty()) throw ShapeError("aggregate: no stations");
  double s = 0.0;
  for (double v : sigma_b) s += v;
  return s / static_cast<double>(sigma_b.size());
}

}  // namespace edgemind::forecast
