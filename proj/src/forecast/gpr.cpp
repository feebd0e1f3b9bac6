#include "edgemind/forecast/gpr.hpp"

#include <Eigen/Cholesky>

#include "edgemind/common/errors.hpp"

namespace edgemind::forecast {

double gpr_kernel(const Eigen::Ref<const Eigen::RowVectorXd>& a, const Eigen::Ref<const Eigen::RowVectorXd>& b,
                  double sigma_k) {
  double dot = 0.0, d2 = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    dot += a(i) * b(i);
    const double d = a(i) - b(i);
    d2 += d * d;
  }
  const double white = (a.array() == b.array()).all() ? 1.0 : 0.0;
  return sigma_k * sigma_k + dot + 1.0 / (1.0 + 0.5 * d2) + white;
}

namespace {

Eigen::MatrixXd base_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, bool symmetric) {
  Eigen::MatrixXd K(A.rows(), B.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const Eigen::Index j0 = symmetric ? i : 0;
    for (Eigen::Index j = j0; j < B.rows(); ++j) {
      const double v = gpr_kernel(A.row(i), B.row(j), 0.0);
      K(i, j) = v;
      if (symmetric) K(j, i) = v;
    }
  }
  return K;
}

}  // namespace

Eigen::MatrixXd gpr_kernel_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double sigma_k) {
  if (A.cols() != B.cols()) throw ShapeError("GPR kernel: feature count mismatch");
  const bool symmetric = &A == &B;
  Eigen::MatrixXd K = base_kernel(A, B, symmetric);
  K.array() += sigma_k * sigma_k;
  return K;
}

Eigen::MatrixXd GprModel::predict(const Eigen::MatrixXd& Xs) const {
  return gpr_kernel_matrix(Xs, X, sigma_k) * dual;
}

GprModel gpr_fit_with_kernel(const Eigen::MatrixXd& X, const Eigen::MatrixXd& K0, const Eigen::MatrixXd& Y,
                             double alpha, double sigma_k) {
  if (X.rows() != Y.rows() || K0.rows() != X.rows() || K0.cols() != X.rows()) {
    throw ShapeError("GPR fit: inconsistent shapes");
  }
  if (X.rows() == 0) throw InsufficientData("GPR fit: no rows");
  if (!(alpha > 0.0)) throw ConfigError("GPR alpha must be > 0");

  GprModel m;
  m.X = X;
  m.alpha = alpha;
  m.sigma_k = sigma_k;
  Eigen::MatrixXd K = K0;
  K.array() += sigma_k * sigma_k;
  K.diagonal().array() += alpha;

  Eigen::LLT<Eigen::MatrixXd> llt(K);
  double extra = 0.0;
  double step = alpha;
  while (llt.info() != Eigen::Success) {
    if (m.retries == 3) throw CholeskyError("GPR kernel matrix is not positive definite after 3 retries");
    step *= 10.0;
    K.diagonal().array() += step - extra;
    extra = step;
    ++m.retries;
    llt.compute(K);
  }
  m.jitter = extra;
  m.dual = llt.solve(Y);
  if (!m.dual.allFinite()) throw ConvergenceError("GPR solve produced non-finite values");
  return m;
}

GprModel gpr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, double alpha, double sigma_k) {
  return gpr_fit_with_kernel(X, base_kernel(X, X, true), Y, alpha, sigma_k);
}

}  // namespace edgemind::forecast
