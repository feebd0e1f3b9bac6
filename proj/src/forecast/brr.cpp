#include "edgemind/forecast/brr.hpp"

#include <Eigen/Cholesky>

#include "edgemind/common/errors.hpp"

namespace edgemind::forecast {

Eigen::MatrixXd BrrModel::predict(const Eigen::MatrixXd& X) const {
  if (X.cols() != weights.rows()) throw ShapeError("BRR predict: feature count mismatch");
  return (X * weights).rowwise() + intercept;
}

BrrModel brr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, double alpha, double lambda) {
  if (X.rows() != Y.rows()) throw ShapeError("BRR fit: X and Y row counts differ");
  if (X.rows() == 0) throw InsufficientData("BRR fit: no rows");
  if (!(alpha > 0.0) || !(lambda > 0.0)) throw ConfigError("BRR alpha and lambda must be > 0");

  const Eigen::RowVectorXd x_mean = X.colwise().mean();
  const Eigen::RowVectorXd y_mean = Y.colwise().mean();
  const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
  const Eigen::MatrixXd Yc = Y.rowwise() - y_mean;

  Eigen::MatrixXd A = Xc.transpose() * Xc;
  A.diagonal().array() += lambda / alpha;
  const Eigen::MatrixXd b = Xc.transpose() * Yc;

  BrrModel m;
  m.alpha = alpha;
  m.lambda = lambda;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) {
    A.diagonal().array() += 1e-10;
    llt.compute(A);
    if (llt.info() != Eigen::Success) throw CholeskyError("BRR normal equations are singular");
    m.jittered = true;
  }
  m.weights = llt.solve(b);
  if (!m.weights.allFinite()) throw ConvergenceError("BRR produced non-finite weights");
  m.intercept = y_mean - x_mean * m.weights;
  return m;
}

}  // namespace edgemind::forecast
