#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "edgemind/forecast/features.hpp"

namespace edgemind::forecast {

// Records every fit and the split tags of the rows it consumed. In strict
// mode a test row reaching a fit throws LeakageError.
class FitAudit {
 public:
  explicit FitAudit(bool strict = true) : strict_(strict) {}

  void observe(std::string_view stage, std::span<const RowSplit> rows);

  std::size_t fits() const { return fits_; }
  std::size_t rows_seen() const { return rows_seen_; }
  std::size_t test_rows_seen() const { return test_rows_; }
  std::size_t unused_rows_seen() const { return unused_rows_; }

 private:
  bool strict_;
  std::size_t fits_ = 0;
  std::size_t rows_seen_ = 0;
  std::size_t test_rows_ = 0;
  std::size_t unused_rows_ = 0;
};

struct ColumnScale {
  bool log1p = false;
  double min = 0.0;
  double max = 1.0;
  bool degenerate = false;  // min == max on train; maps to 0
};

// log(1 + x) on count columns, then min-max to [0, 1] using train ranges.
// Applies to X columns and every Y column (targets are counts).
struct Transform {
  std::vector<ColumnScale> x;
  std::vector<ColumnScale> y;

  Eigen::MatrixXd apply_x(const Eigen::MatrixXd& X) const;
  Eigen::MatrixXd apply_y(const Eigen::MatrixXd& Y) const;
  Eigen::MatrixXd inverse_x(const Eigen::MatrixXd& Xs) const;
  Eigen::MatrixXd inverse_y(const Eigen::MatrixXd& Ys) const;

  std::vector<std::size_t> degenerate_x() const;
};

// Fits on every row of `train`, which must all be tagged train when an
// audit is attached. Throws InsufficientData for an empty matrix.
Transform fit_transform(const DesignMatrix& train, FitAudit* audit = nullptr);

DesignMatrix apply_transform(const Transform& t, const DesignMatrix& dm);

}  // namespace edgemind::forecast
