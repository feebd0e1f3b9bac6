#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace edgemind::clustering {

struct SizeBounds {
  std::size_t min = 0;
  std::size_t max = 0;
};

// floor(0.8 N/k) .. ceil(1.2 N/k), computed in integers.
SizeBounds default_size_bounds(std::size_t n_points, std::size_t n_clusters);

bool feasible(std::size_t n_points, std::size_t n_clusters, SizeBounds bounds);

struct Assignment {
  std::vector<int> labels;
  double cost = 0.0;  // sum of squared distances to the assigned centroid
};

// Optimal size-constrained assignment of rows of `points` to rows of
// `centroids`, solved as a min-cost flow. Throws InfeasibleError.
Assignment assign_constrained(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids, SizeBounds bounds);

struct KMeansOptions {
  int restarts = 20;
  int max_iter = 100;
};

struct KMeansResult {
  std::vector<int> labels;  // canonical: cluster ids ordered by lowest member
  Eigen::MatrixXd centroids;
  double objective = 0.0;
  int iterations = 0;
  int best_restart = 0;
  std::vector<double> objective_trace;  // assignment cost per iteration, best restart
};

// Lloyd iterations with the constrained assignment step, k-means++ seeding,
// best of `restarts` by objective (ties keep the earlier restart).
KMeansResult constrained_kmeans(const Eigen::MatrixXd& points, std::size_t k, SizeBounds bounds,
                                std::uint64_t seed, const KMeansOptions& options = {});

// Relabels so cluster ids appear in order of their lowest member index.
std::vector<int> canonical_labels(const std::vector<int>& labels);

// Sum of squared distances of each point to the mean of its cluster.
double within_cluster_ss(const Eigen::MatrixXd& points, const std::vector<int>& labels, std::size_t k);

}  // namespace edgemind::clustering
