#include "edgemind/forecast/features.hpp"

#include <chrono>

#include "edgemind/common/errors.hpp"

namespace edgemind::forecast {
namespace {

// Start position of the run containing each bin position, or -1 for bins
// outside the mapped hours.
std::vector<std::ptrdiff_t> run_starts(const StationSeries& s, const Calendar& cal) {
  std::vector<std::ptrdiff_t> starts(s.values.size(), -1);
  std::int64_t prev_day = -1;
  for (std::size_t p = 0; p < s.values.size(); ++p) {
    const auto info = cal.at(s.values[p].bin);
    if (!info.h) continue;
    const bool continues = p > 0 && starts[p - 1] >= 0 && s.values[p].bin == s.values[p - 1].bin + 1 &&
                           info.day == prev_day;
    starts[p] = continues ? starts[p - 1] : static_cast<std::ptrdiff_t>(p);
    prev_day = info.day;
  }
  return starts;
}

void check_aligned(std::span<const StationSeries> members, const Calendar& cal) {
  if (members.empty()) throw AlignmentError("cluster has no member series");
  const auto& ref = members.front();
  for (const auto& m : members) {
    if (m.bin_s != cal.bin_s()) throw AlignmentError("series bin width differs from the calendar");
    if (m.values.size() != ref.values.size()) throw AlignmentError("member series differ in length");
    for (std::size_t p = 0; p < m.values.size(); ++p) {
      if (m.values[p].bin != ref.values[p].bin) throw AlignmentError("member series bins differ");
      if (p > 0 && m.values[p].bin <= m.values[p - 1].bin) throw AlignmentError("series bins must be strictly increasing");
    }
  }
}

std::size_t step_width(std::size_t members, const FeatureSpec& spec) { return members + 1 + (spec.weekday_flag ? 1 : 0); }

void fill_row(std::span<const StationSeries> members, const Calendar& cal, const FeatureSpec& spec, std::size_t p,
              Eigen::RowVectorXd& row) {
  const std::size_t k = members.size();
  const std::size_t width = step_width(k, spec);
  for (std::size_t step = 0; step < spec.window; ++step) {
    const std::size_t q = p + 1 + step - spec.window;
    const std::size_t base = step * width;
    for (std::size_t m = 0; m < k; ++m) row(static_cast<Eigen::Index>(base + m)) = static_cast<double>(members[m].values[q].n_ue);
    const auto info = cal.at(members[0].values[q].bin);
    row(static_cast<Eigen::Index>(base + k)) = static_cast<double>(*info.h);
    if (spec.weekday_flag) row(static_cast<Eigen::Index>(base + k + 1)) = info.weekday ? 1.0 : 0.0;
  }
}

}  // namespace

DesignMatrix DesignMatrix::take(std::span<const std::size_t> rows) const {
  DesignMatrix out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  out.Y.resize(static_cast<Eigen::Index>(rows.size()), Y.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
    out.Y.row(static_cast<Eigen::Index>(i)) = Y.row(static_cast<Eigen::Index>(rows[i]));
    out.feature_bin.push_back(feature_bin[rows[i]]);
    out.target_bin.push_back(target_bin[rows[i]]);
    out.split.push_back(split[rows[i]]);
  }
  out.count_column = count_column;
  out.stations = stations;
  out.window = window;
  out.lookahead = lookahead;
  return out;
}

std::vector<std::size_t> DesignMatrix::rows_with(RowSplit s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < split.size(); ++i) {
    if (split[i] == s) out.push_back(i);
  }
  return out;
}

DesignMatrix build_cluster(std::span<const StationSeries> members, const Calendar& calendar, const FeatureSpec& spec) {
  if (spec.window < 1 || spec.lookahead < 1) throw ConfigError("window and lookahead must be >= 1");
  check_aligned(members, calendar);
  const auto starts = run_starts(members.front(), calendar);
  const std::size_t n = starts.size();

  std::vector<std::size_t> positions;
  for (std::size_t p = 0; p < n; ++p) {
    if (starts[p] < 0) continue;
    const std::size_t offset = p - static_cast<std::size_t>(starts[p]);
    const std::size_t target = p + spec.lookahead;
    if (offset < spec.window || target >= n || starts[target] != starts[p]) continue;
    positions.push_back(p);
  }
  if (positions.empty()) throw InsufficientData("series too short for window " + std::to_string(spec.window) +
                                                " and lookahead " + std::to_string(spec.lookahead));

  const std::size_t k = members.size();
  const std::size_t width = step_width(k, spec);
  DesignMatrix dm;
  dm.window = spec.window;
  dm.lookahead = spec.lookahead;
  dm.X.resize(static_cast<Eigen::Index>(positions.size()), static_cast<Eigen::Index>(width * spec.window));
  dm.Y.resize(static_cast<Eigen::Index>(positions.size()), static_cast<Eigen::Index>(k));
  Eigen::RowVectorXd row(dm.X.cols());
  for (std::size_t r = 0; r < positions.size(); ++r) {
    const std::size_t p = positions[r];
    fill_row(members, calendar, spec, p, row);
    dm.X.row(static_cast<Eigen::Index>(r)) = row;
    for (std::size_t m = 0; m < k; ++m) {
      dm.Y(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(m)) =
          static_cast<double>(members[m].values[p + spec.lookahead].n_ue);
    }
    dm.feature_bin.push_back(members[0].values[p].bin);
    dm.target_bin.push_back(members[0].values[p + spec.lookahead].bin);
  }
  dm.split.assign(positions.size(), RowSplit::unused);
  dm.count_column.assign(width * spec.window, false);
  for (std::size_t step = 0; step < spec.window; ++step) {
    for (std::size_t m = 0; m < k; ++m) dm.count_column[step * width + m] = true;
  }
  for (const auto& m : members) dm.stations.push_back(m.station);
  return dm;
}

DesignMatrix build_local(const StationSeries& series, const Calendar& calendar, const FeatureSpec& spec) {
  return build_cluster(std::span<const StationSeries>(&series, 1), calendar, spec);
}

bool feature_row(std::span<const StationSeries> members, const Calendar& calendar, const FeatureSpec& spec,
                 std::int64_t t, Eigen::RowVectorXd& out) {
  check_aligned(members, calendar);
  const auto& ref = members.front().values;
  std::size_t p = 0;
  while (p < ref.size() && ref[p].bin < t) ++p;
  if (p >= ref.size() || ref[p].bin != t) return false;
  const auto starts = run_starts(members.front(), calendar);
  if (starts[p] < 0 || p - static_cast<std::size_t>(starts[p]) < spec.window) return false;
  out.resize(static_cast<Eigen::Index>(step_width(members.size(), spec) * spec.window));
  fill_row(members, calendar, spec, p, out);
  return true;
}

void tag_split(DesignMatrix& dm, const Calendar& calendar, const SplitSpec& split) {
  if (split.train_end > split.test_start) throw ConfigError("test period must start after the training period");
  const auto bin = std::chrono::seconds{calendar.bin_s()};
  for (std::size_t r = 0; r < dm.rows(); ++r) {
    const auto first = calendar.start_of(dm.feature_bin[r] - static_cast<std::int64_t>(dm.window) + 1);
    const auto last = calendar.start_of(dm.target_bin[r]) + bin;
    if (first >= split.train_start && last <= split.train_end) {
      dm.split[r] = RowSplit::train;
    } else if (first >= split.test_start && last <= split.test_end) {
      dm.split[r] = RowSplit::test;
    } else {
      dm.split[r] = RowSplit::unused;
    }
  }
}

}  // namespace edgemind::forecast
