#include "edgemind/forecast/transform.hpp"

#include <cmath>
#include <string>

#include "edgemind/common/errors.hpp"

namespace edgemind::forecast {

void FitAudit::observe(std::string_view stage, std::span<const RowSplit> rows) {
  ++fits_;
  rows_seen_ += rows.size();
  std::size_t test = 0;
  for (auto r : rows) {
    if (r == RowSplit::test) ++test;
    if (r == RowSplit::unused) ++unused_rows_;
  }
  test_rows_ += test;
  if (strict_ && test > 0) {
    throw LeakageError(std::string(stage) + ": fit received " + std::to_string(test) + " test rows");
  }
}

namespace {

std::vector<ColumnScale> fit_columns(const Eigen::MatrixXd& M, const std::vector<bool>& counts) {
  std::vector<ColumnScale> out(static_cast<std::size_t>(M.cols()));
  for (Eigen::Index c = 0; c < M.cols(); ++c) {
    auto& s = out[static_cast<std::size_t>(c)];
    s.log1p = counts[static_cast<std::size_t>(c)];
    auto col = M.col(c);
    const double lo = col.minCoeff(), hi = col.maxCoeff();
    s.min = s.log1p ? std::log1p(lo) : lo;
    s.max = s.log1p ? std::log1p(hi) : hi;
    s.degenerate = !(s.max > s.min);
  }
  return out;
}

Eigen::MatrixXd forward(const std::vector<ColumnScale>& scales, const Eigen::MatrixXd& M) {
  if (static_cast<std::size_t>(M.cols()) != scales.size()) throw ShapeError("transform column count mismatch");
  Eigen::MatrixXd out(M.rows(), M.cols());
  for (Eigen::Index c = 0; c < M.cols(); ++c) {
    const auto& s = scales[static_cast<std::size_t>(c)];
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
      const double v = s.log1p ? std::log1p(M(r, c)) : M(r, c);
      out(r, c) = s.degenerate ? 0.0 : (v - s.min) / (s.max - s.min);
    }
  }
  return out;
}

Eigen::MatrixXd backward(const std::vector<ColumnScale>& scales, const Eigen::MatrixXd& M) {
  if (static_cast<std::size_t>(M.cols()) != scales.size()) throw ShapeError("transform column count mismatch");
  Eigen::MatrixXd out(M.rows(), M.cols());
  for (Eigen::Index c = 0; c < M.cols(); ++c) {
    const auto& s = scales[static_cast<std::size_t>(c)];
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
      const double v = s.degenerate ? s.min : s.min + M(r, c) * (s.max - s.min);
      out(r, c) = s.log1p ? std::expm1(v) : v;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd Transform::apply_x(const Eigen::MatrixXd& X) const { return forward(x, X); }
Eigen::MatrixXd Transform::apply_y(const Eigen::MatrixXd& Y) const { return forward(y, Y); }
Eigen::MatrixXd Transform::inverse_x(const Eigen::MatrixXd& Xs) const { return backward(x, Xs); }
Eigen::MatrixXd Transform::inverse_y(const Eigen::MatrixXd& Ys) const { return backward(y, Ys); }

std::vector<std::size_t> Transform::degenerate_x() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < x.size(); ++c) {
    if (x[c].degenerate) out.push_back(c);
  }
  return out;
}

Transform fit_transform(const DesignMatrix& train, FitAudit* audit) {
  if (train.rows() == 0) throw InsufficientData("cannot fit a transform on zero rows");
  if (audit) audit->observe("fit_transform", train.split);
  Transform t;
  t.x = fit_columns(train.X, train.count_column);
  t.y = fit_columns(train.Y, std::vector<bool>(static_cast<std::size_t>(train.Y.cols()), true));
  return t;
}

DesignMatrix apply_transform(const Transform& t, const DesignMatrix& dm) {
  DesignMatrix out = dm;
  out.X = t.apply_x(dm.X);
  out.Y = t.apply_y(dm.Y);
  return out;
}

}  // namespace edgemind::forecast
