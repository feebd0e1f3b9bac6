#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "edgemind/forecast/calendar.hpp"
#include "edgemind/telemetry/types.hpp"

namespace edgemind::forecast {

struct FeatureSpec {
  std::size_t window = 1;     // W past samples
  std::size_t lookahead = 1;  // L steps ahead
  bool weekday_flag = true;   // include omega(t) after h(t)
};

enum class RowSplit { unused, train, test };

// Rows are chronological. For each past step, the row holds the member
// counts followed by h and omega:
//   [n_0(t-W+1) .. n_{K-1}(t-W+1), h(t-W+1), w(t-W+1), ..., n_0(t) .., h(t), w(t)]
// and Y holds [n_0(t+L) .. n_{K-1}(t+L)].
struct DesignMatrix {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;
  std::vector<std::int64_t> feature_bin;  // t, the latest feature step
  std::vector<std::int64_t> target_bin;   // t + L
  std::vector<RowSplit> split;
  std::vector<bool> count_column;         // per X column: is a user count
  std::vector<StationId> stations;        // one per Y column
  std::size_t window = 0;
  std::size_t lookahead = 0;

  std::size_t rows() const { return static_cast<std::size_t>(X.rows()); }
  // Row subset in the given order.
  DesignMatrix take(std::span<const std::size_t> rows) const;
  std::vector<std::size_t> rows_with(RowSplit s) const;
};

// Rows come from runs of consecutive bins within one calendar day whose
// hours are mapped. In each run the first W samples are never a row's
// latest step, and t + L must stay in the run. Throws InsufficientData
// when no row fits.
DesignMatrix build_local(const StationSeries& series, const Calendar& calendar, const FeatureSpec& spec);

// Multi-output variant over the members of one cluster. Throws
// AlignmentError when member series do not share their bins.
DesignMatrix build_cluster(std::span<const StationSeries> members, const Calendar& calendar, const FeatureSpec& spec);

// Feature row for the latest step `t` without a target; used for live
// prediction. Returns false when the history window is not available.
bool feature_row(std::span<const StationSeries> members, const Calendar& calendar, const FeatureSpec& spec,
                 std::int64_t t, Eigen::RowVectorXd& out);

// Train rows lie wholly in [train_start, train_end), test rows wholly in
// [test_start, test_end), measured from the first feature bin's start to
// the target bin's end. Throws ConfigError unless train_end <= test_start.
struct SplitSpec {
  TimePoint train_start{};
  TimePoint train_end{};
  TimePoint test_start{};
  TimePoint test_end{};
};

void tag_split(DesignMatrix& dm, const Calendar& calendar, const SplitSpec& split);

}  // namespace edgemind::forecast
