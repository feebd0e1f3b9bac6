#include "edgemind/forecast/forest.hpp"

#include <algorithm>
#include <numeric>

#include "edgemind/common/errors.hpp"
#include "edgemind/common/rng.hpp"

namespace edgemind::forecast {

namespace {

bool constant_targets(const Eigen::MatrixXd& Y, const std::vector<std::size_t>& rows, std::size_t begin,
                      std::size_t end) {
  const auto first = Y.row(static_cast<Eigen::Index>(rows[begin]));
  for (std::size_t i = begin + 1; i < end; ++i) {
    if (Y.row(static_cast<Eigen::Index>(rows[i])) != first) return false;
  }
  return true;
}

}  // namespace

void RegressionTree::fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, std::vector<std::size_t> rows,
                         std::size_t min_samples_split) {
  if (X.rows() != Y.rows()) throw ShapeError("tree fit: X and Y row counts differ");
  if (rows.empty()) throw InsufficientData("tree fit: no rows");
  nodes_.clear();
  values_.clear();
  build(X, Y, rows, 0, rows.size(), std::max<std::size_t>(2, min_samples_split));
}

std::size_t RegressionTree::build(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, std::vector<std::size_t>& rows,
                                  std::size_t begin, std::size_t end, std::size_t min_samples_split) {
  const std::size_t id = nodes_.size();
  nodes_.emplace_back();
  const std::size_t n = end - begin;
  const Eigen::Index T = Y.cols();

  Eigen::RowVectorXd total = Eigen::RowVectorXd::Zero(T);
  for (std::size_t i = begin; i < end; ++i) total += Y.row(static_cast<Eigen::Index>(rows[i]));

  auto make_leaf = [&] {
    nodes_[id].feature = -1;
    nodes_[id].value = values_.size();
    values_.push_back(total / static_cast<double>(n));
    return id;
  };
  if (n < min_samples_split || constant_targets(Y, rows, begin, end)) return make_leaf();

  // Minimising child SSE is maximising sum_t (S_L^2 / n_L + S_R^2 / n_R).
  int best_feature = -1;
  double best_score = -1.0, best_threshold = 0.0;
  std::vector<std::size_t> order(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                                 rows.begin() + static_cast<std::ptrdiff_t>(end));
  Eigen::RowVectorXd left(T);
  for (Eigen::Index f = 0; f < X.cols(); ++f) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double xa = X(static_cast<Eigen::Index>(a), f), xb = X(static_cast<Eigen::Index>(b), f);
      return xa < xb || (xa == xb && a < b);
    });
    left.setZero();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left += Y.row(static_cast<Eigen::Index>(order[i]));
      const double xi = X(static_cast<Eigen::Index>(order[i]), f);
      const double xn = X(static_cast<Eigen::Index>(order[i + 1]), f);
      if (!(xi < xn)) continue;
      const double nl = static_cast<double>(i + 1), nr = static_cast<double>(n - i - 1);
      const double score = left.squaredNorm() / nl + (total - left).squaredNorm() / nr;
      if (score > best_score) {
        best_score = score;
        best_feature = static_cast<int>(f);
        double mid = 0.5 * (xi + xn);
        if (!(mid < xn)) mid = xi;
        best_threshold = mid;
      }
    }
  }
  if (best_feature < 0) return make_leaf();  // every row shares its inputs

  const auto f = static_cast<Eigen::Index>(best_feature);
  const auto mid_it = std::stable_partition(
      rows.begin() + static_cast<std::ptrdiff_t>(begin), rows.begin() + static_cast<std::ptrdiff_t>(end),
      [&](std::size_t r) { return X(static_cast<Eigen::Index>(r), f) <= best_threshold; });
  const auto mid = static_cast<std::size_t>(mid_it - rows.begin());

  nodes_[id].feature = best_feature;
  nodes_[id].threshold = best_threshold;
  const std::size_t l = build(X, Y, rows, begin, mid, min_samples_split);
  const std::size_t r = build(X, Y, rows, mid, end, min_samples_split);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

Eigen::RowVectorXd RegressionTree::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  std::size_t at = 0;
  while (nodes_[at].feature >= 0) {
    const auto& node = nodes_[at];
    at = x(node.feature) <= node.threshold ? node.left : node.right;
  }
  return values_[nodes_[at].value];
}

std::size_t RegressionTree::n_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& node) { return node.feature < 0; }));
}

Eigen::MatrixXd ForestModel::predict(const Eigen::MatrixXd& X) const {
  if (trees.empty()) throw ShapeError("forest has no trees");
  Eigen::MatrixXd out;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    Eigen::RowVectorXd acc = trees.front().predict_row(X.row(i));
    for (std::size_t t = 1; t < trees.size(); ++t) acc += trees[t].predict_row(X.row(i));
    if (out.size() == 0) out.resize(X.rows(), acc.size());
    out.row(i) = acc / static_cast<double>(trees.size());
  }
  return out;
}

ForestModel rfr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, const ForestOptions& options) {
  if (options.n_trees < 1) throw ConfigError("forest needs at least one tree");
  if (X.rows() == 0) throw InsufficientData("forest fit: no rows");
  const auto n = static_cast<std::size_t>(X.rows());
  ForestModel forest;
  forest.trees.resize(options.n_trees);
  for (std::size_t t = 0; t < options.n_trees; ++t) {
    std::vector<std::size_t> rows(n);
    if (options.bootstrap) {
      Rng rng(sub_seed(options.seed, static_cast<std::uint64_t>(t)));
      for (auto& r : rows) r = static_cast<std::size_t>(rng.index(n));
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    forest.trees[t].fit(X, Y, std::move(rows), options.min_samples_split);
  }
  return forest;
}

}  // namespace edgemind::forecast
