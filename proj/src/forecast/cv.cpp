#include "edgemind/forecast/cv.hpp"

#include <string>

#include "edgemind/common/errors.hpp"
#include "edgemind/forecast/metrics.hpp"

namespace edgemind::forecast {

std::vector<Fold> time_series_splits(std::size_t n, std::size_t folds) {
  if (folds < 1) throw ConfigError("need at least one fold");
  const std::size_t block = n / (folds + 1);
  if (block == 0) {
    throw InsufficientData(std::to_string(n) + " rows cannot form " + std::to_string(folds) + " folds");
  }
  std::vector<Fold> out;
  for (std::size_t k = 0; k < folds; ++k) {
    const std::size_t start = n - (folds - k) * block;
    out.push_back({start, start + block});
  }
  return out;
}

CvResult cv_select(const std::vector<ModelSpec>& grid, TrainingData& data, const Transform& transform,
                   std::span<const RowSplit> split, std::size_t folds, FitAudit* audit, bool score_single) {
  if (grid.empty()) throw ConfigError("empty hyperparameter grid");
  if (split.size() != data.rows()) throw ShapeError("cv: split tags do not match the data");
  CvResult result;
  result.best = grid.front();
  if (grid.size() == 1 && !score_single) return result;

  const auto splits = time_series_splits(data.rows(), folds);
  double best = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double total = 0.0;
    for (const auto& f : splits) {
      if (audit) audit->observe("cv:" + to_string(grid[g].method), split.first(f.train_end));
      const Eigen::MatrixXd pred = data.predict_rows(grid[g], f.train_end, f.train_end, f.val_end);
      const auto rows = static_cast<Eigen::Index>(f.val_end - f.train_end);
      const Eigen::MatrixXd truth = transform.inverse_y(data.Y().middleRows(static_cast<Eigen::Index>(f.train_end), rows));
      const Eigen::VectorXd sig = column_rmse(truth, transform.inverse_y(pred));
      total += sig.mean();
    }
    const double score = total / static_cast<double>(splits.size());
    result.scores.push_back(score);
    if (g == 0 || score < best) {
      best = score;
      result.best = grid[g];
      result.best_index = g;
    }
  }
  return result;
}

}  // namespace edgemind::forecast
