#pragma once

#include <Eigen/Core>

namespace edgemind::forecast {

// k(x, x') = sigma_k^2 + x.x' + (1 + |x - x'|^2 / 2)^-1 + [x == x']
// The last term is a unit-variance white kernel: 1 on exactly equal inputs.
double gpr_kernel(const Eigen::Ref<const Eigen::RowVectorXd>& a, const Eigen::Ref<const Eigen::RowVectorXd>& b,
                  double sigma_k);
Eigen::MatrixXd gpr_kernel_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double sigma_k);

struct GprModel {
  Eigen::MatrixXd X;     // training inputs
  Eigen::MatrixXd dual;  // (K + alpha I)^-1 Y, M x T
  double alpha = 1e-6;
  double sigma_k = 0.01;
  double jitter = 0.0;  // extra diagonal added on Cholesky retries
  int retries = 0;

  Eigen::MatrixXd predict(const Eigen::MatrixXd& Xs) const;
};

// Cholesky of K + alpha I; on failure the diagonal grows by 10x alpha up to
// three times before CholeskyError.
GprModel gpr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, double alpha, double sigma_k);

// Same, reusing a precomputed base kernel without the sigma_k^2 offset.
GprModel gpr_fit_with_kernel(const Eigen::MatrixXd& X, const Eigen::MatrixXd& K0, const Eigen::MatrixXd& Y,
                             double alpha, double sigma_k);

}  // namespace edgemind::forecast
