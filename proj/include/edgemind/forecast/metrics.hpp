#pragma once

#include <span>

#include <Eigen/Core>

namespace edgemind::forecast {

// Root mean squared error. Throws ShapeError on a length mismatch or empty input.
double rmse(std::span<const double> y, std::span<const double> y_hat);
double rmse(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& y_hat);

// Per-column RMSE of two equally shaped matrices.
Eigen::VectorXd column_rmse(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Y_hat);

// Arithmetic mean of per-station errors.
double aggregate(std::span<const double> sigma_b);

}  // namespace edgemind::forecast
