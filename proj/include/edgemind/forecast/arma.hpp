#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace edgemind::forecast {

// ARMA(p, q) on the first-differenced series:
//   d(t) = c + sum_i phi_i d(t-i) + e(t) + sum_j theta_j e(t-j)
struct ArmaModel {
  std::size_t p = 4;
  std::size_t q = 2;
  double c = 0.0;
  Eigen::VectorXd phi;
  Eigen::VectorXd theta;
  double residual_sd = 0.0;
  bool persistence = false;  // fit diverged or too little data; forecast = last value
};

// Hannan-Rissanen: a long AR fit supplies residual estimates, then the
// ARMA coefficients come from least squares on lagged d and lagged
// residuals. Each segment is an independent contiguous stretch of the
// undifferenced series; lags never cross segment boundaries.
ArmaModel arma_fit(std::span<const std::vector<double>> segments, std::size_t p = 4, std::size_t q = 2);

// Forecast `history`'s value `lookahead` steps past its last element.
// Residuals are filtered from the start of history with zero initial state.
double arma_forecast(const ArmaModel& model, std::span<const double> history, std::size_t lookahead);

}  // namespace edgemind::forecast
