#include "edgemind/clustering/constrained_kmeans.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "edgemind/common/errors.hpp"
#include "edgemind/common/rng.hpp"
#include "min_cost_flow.hpp"

namespace edgemind::clustering {
namespace {

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids) {
  Eigen::MatrixXd d(points.rows(), centroids.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < centroids.rows(); ++j) d(i, j) = (points.row(i) - centroids.row(j)).squaredNorm();
  }
  return d;
}

Eigen::MatrixXd kmeanspp_seeds(const Eigen::MatrixXd& points, std::size_t k, Rng& rng) {
  const auto m = static_cast<std::size_t>(points.rows());
  Eigen::MatrixXd centroids(static_cast<Eigen::Index>(k), points.cols());
  std::vector<double> best(m, std::numeric_limits<double>::infinity());
  std::size_t pick = static_cast<std::size_t>(rng.index(m));
  for (std::size_t c = 0; c < k; ++c) {
    centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(pick));
    for (std::size_t i = 0; i < m; ++i) {
      best[i] = std::min(best[i], (points.row(static_cast<Eigen::Index>(i)) - centroids.row(static_cast<Eigen::Index>(c))).squaredNorm());
    }
    if (c + 1 < k) pick = rng.weighted(best);
  }
  return centroids;
}

void update_centroids(const Eigen::MatrixXd& points, const std::vector<int>& labels, Eigen::MatrixXd& centroids) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(centroids.rows(), centroids.cols());
  std::vector<std::size_t> sizes(static_cast<std::size_t>(centroids.rows()), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sums.row(labels[i]) += points.row(static_cast<Eigen::Index>(i));
    ++sizes[static_cast<std::size_t>(labels[i])];
  }
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    // An empty cluster keeps its previous centroid.
    if (sizes[static_cast<std::size_t>(c)] > 0) centroids.row(c) = sums.row(c) / static_cast<double>(sizes[static_cast<std::size_t>(c)]);
  }
}

}  // namespace

SizeBounds default_size_bounds(std::size_t n_points, std::size_t n_clusters) {
  if (n_clusters == 0) throw ConfigError("n_clusters must be >= 1");
  // floor(0.8 n / k) and ceil(1.2 n / k) in exact integer arithmetic.
  const std::size_t lo = (4 * n_points) / (5 * n_clusters);
  const std::size_t hi = (6 * n_points + 5 * n_clusters - 1) / (5 * n_clusters);
  return {lo, hi};
}

bool feasible(std::size_t n_points, std::size_t n_clusters, SizeBounds b) {
  return b.min <= b.max && n_clusters * b.min <= n_points && n_points <= n_clusters * b.max;
}

Assignment assign_constrained(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids, SizeBounds bounds) {
  const auto m = static_cast<std::size_t>(points.rows());
  const auto k = static_cast<std::size_t>(centroids.rows());
  if (k == 0 || points.cols() != centroids.cols()) throw ShapeError("points and centroids disagree in dimension");
  if (!feasible(m, k, bounds)) {
    throw InfeasibleError("cannot place " + std::to_string(m) + " points into " + std::to_string(k) +
                          " clusters of size [" + std::to_string(bounds.min) + ", " + std::to_string(bounds.max) + "]");
  }
  const Eigen::MatrixXd d2 = squared_distances(points, centroids);
  // Each cluster drains through a free arc of capacity `min` and a
  // penalised arc for the overflow; the penalty exceeds any assignment
  // cost, so every optimum fills the lower bounds first.
  const double penalty = 1.0 + d2.rowwise().maxCoeff().sum();

  const std::size_t source = 0, first_point = 1, first_cluster = 1 + m, sink = 1 + m + k;
  detail::MinCostFlow flow(sink + 1);
  for (std::size_t i = 0; i < m; ++i) flow.add_arc(source, first_point + i, 1, 0.0);
  std::vector<std::size_t> arc_of(m * k);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      arc_of[i * k + j] = flow.add_arc(first_point + i, first_cluster + j, 1,
                                       d2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (bounds.min > 0) flow.add_arc(first_cluster + j, sink, static_cast<long>(bounds.min), 0.0);
    if (bounds.max > bounds.min) flow.add_arc(first_cluster + j, sink, static_cast<long>(bounds.max - bounds.min), penalty);
  }
  if (flow.solve(source, sink, static_cast<long>(m)) != static_cast<long>(m)) {
    throw InfeasibleError("assignment flow could not route every point");
  }

  Assignment out;
  out.labels.assign(m, -1);
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (flow.flow(arc_of[i * k + j]) > 0) {
        out.labels[i] = static_cast<int>(j);
        out.cost += d2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        ++sizes[j];
      }
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (sizes[j] < bounds.min || sizes[j] > bounds.max) throw InfeasibleError("assignment violated size bounds");
  }
  return out;
}

std::vector<int> canonical_labels(const std::vector<int>& labels) {
  std::vector<int> map;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto l = static_cast<std::size_t>(labels[i]);
    if (map.size() <= l) map.resize(l + 1, -1);
    if (map[l] < 0) map[l] = static_cast<int>(std::count_if(map.begin(), map.end(), [](int v) { return v >= 0; }));
    out[i] = map[l];
  }
  return out;
}

double within_cluster_ss(const Eigen::MatrixXd& points, const std::vector<int>& labels, std::size_t k) {
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), points.cols());
  update_centroids(points, labels, centroids);
  double ss = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ss += (points.row(static_cast<Eigen::Index>(i)) - centroids.row(labels[i])).squaredNorm();
  }
  return ss;
}

KMeansResult constrained_kmeans(const Eigen::MatrixXd& points, std::size_t k, SizeBounds bounds, std::uint64_t seed,
                                const KMeansOptions& options) {
  const auto m = static_cast<std::size_t>(points.rows());
  if (k == 0 || k > m) throw ConfigError("k must be in [1, number of points]");
  if (!feasible(m, k, bounds)) {
    throw InfeasibleError("size bounds [" + std::to_string(bounds.min) + ", " + std::to_string(bounds.max) +
                          "] infeasible for " + std::to_string(m) + " points in " + std::to_string(k) + " clusters");
  }
  KMeansResult best;
  bool have_best = false;
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    Rng rng(sub_seed(seed, static_cast<std::uint64_t>(r)));
    Eigen::MatrixXd centroids = kmeanspp_seeds(points, k, rng);
    std::vector<int> labels;
    std::vector<double> trace;
    int it = 0;
    for (; it < std::max(1, options.max_iter); ++it) {
      Assignment a = assign_constrained(points, centroids, bounds);
      trace.push_back(a.cost);
      const bool converged = a.labels == labels;
      labels = std::move(a.labels);
      if (converged) break;
      update_centroids(points, labels, centroids);
    }
    const double objective = within_cluster_ss(points, labels, k);
    if (!have_best || objective < best.objective) {
      best.labels = labels;
      best.centroids = centroids;
      best.objective = objective;
      best.iterations = it + 1;
      best.best_restart = r;
      best.objective_trace = std::move(trace);
      have_best = true;
    }
  }
  // Permute centroid rows to match the canonical ids; empty clusters last.
  const std::vector<int> canon = canonical_labels(best.labels);
  std::vector<int> new_id(k, -1);
  for (std::size_t i = 0; i < m; ++i) new_id[static_cast<std::size_t>(best.labels[i])] = canon[i];
  int next = *std::max_element(canon.begin(), canon.end()) + 1;
  Eigen::MatrixXd reordered(best.centroids.rows(), best.centroids.cols());
  for (std::size_t c = 0; c < k; ++c) {
    if (new_id[c] < 0) new_id[c] = next++;
    reordered.row(new_id[c]) = best.centroids.row(static_cast<Eigen::Index>(c));
  }
  best.centroids = std::move(reordered);
  best.labels = canon;
  return best;
}

}  // namespace edgemind::clustering
