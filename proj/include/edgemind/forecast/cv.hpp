#pragma once

#include <cstddef>
#include <vector>

#include "edgemind/forecast/features.hpp"
#include "edgemind/forecast/models.hpp"
#include "edgemind/forecast/transform.hpp"

namespace edgemind::forecast {

// Expanding-window split over chronologically ordered rows: fold k trains on
// [0, train_end) and validates on the next block [train_end, val_end).
struct Fold {
  std::size_t train_end = 0;
  std::size_t val_end = 0;
};

// Blocks of n / (folds + 1) rows; the last `folds` blocks are validation
// sets. Throws InsufficientData when a block would be empty.
std::vector<Fold> time_series_splits(std::size_t n, std::size_t folds = 3);

struct CvResult {
  ModelSpec best;
  std::size_t best_index = 0;
  std::vector<double> scores;  // mean validation sigma-hat per grid point, count scale
};

// Scores each grid point by the validation RMSE on the count scale
// (inverse-transformed), averaged over output columns and folds. Ties keep
// the earlier grid point. A single point is returned without fitting unless
// `score_single` is set.
// `split` holds the tags of data's rows and is reported to the audit per fit.
CvResult cv_select(const std::vector<ModelSpec>& grid, TrainingData& data, const Transform& transform,
                   std::span<const RowSplit> split, std::size_t folds = 3, FitAudit* audit = nullptr, bool score_single = false);

}  // namespace edgemind::forecast
