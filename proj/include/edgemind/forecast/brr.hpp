#pragma once

#include <Eigen/Core>

namespace edgemind::forecast {

// Bayesian ridge with fixed noise precision alpha and weight precision
// lambda. The posterior mean is the ridge solution with penalty lambda/alpha;
// the intercept comes from centering.
struct BrrModel {
  Eigen::MatrixXd weights;       // F x T
  Eigen::RowVectorXd intercept;  // 1 x T
  double alpha = 1.0;
  double lambda = 1.0;
  bool jittered = false;  // singular system resolved with 1e-10 I

  Eigen::MatrixXd predict(const Eigen::MatrixXd& X) const;
};

BrrModel brr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, double alpha, double lambda);

}  // namespace edgemind::forecast
