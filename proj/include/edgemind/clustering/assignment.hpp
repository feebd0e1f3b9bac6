#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edgemind/clustering/constrained_kmeans.hpp"
#include "edgemind/clustering/graph.hpp"
#include "edgemind/telemetry/types.hpp"

namespace edgemind::clustering {

enum class Strategy { data_driven, geographic };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& text);  // throws ConfigError

struct SourceWindow {
  std::int64_t start = 0;
  std::int64_t len = 0;
};

// Station -> controller map.
struct ClusterAssignment {
  std::vector<int> labels;
  std::size_t n_clusters = 0;
  std::size_t min_size = 0;
  std::size_t max_size = 0;
  Strategy strategy = Strategy::data_driven;
  std::optional<SourceWindow> source_window;  // nullopt = static

  std::vector<std::size_t> sizes() const;
  std::vector<StationId> members(int cluster) const;
};

// Throws ShapeError when labels fall outside 0..n_clusters-1 or a cluster
// size leaves [min_size, max_size].
void validate(const ClusterAssignment& a);

nlohmann::json to_json(const ClusterAssignment& a);
ClusterAssignment assignment_from_json(const nlohmann::json& j);

struct ClusterOptions {
  KMeansOptions kmeans;
  std::optional<SizeBounds> bounds;  // default_size_bounds when unset
};

// Intermediate products of the data-driven pipeline.
struct GraphArtifacts {
  Eigen::MatrixXd H;
  Eigen::MatrixXd W;
  Laplacian laplacian;
  SpectralEmbedding embedding;
};

// Transition matrix -> weight graph -> random-walk Laplacian -> spectral
// embedding -> constrained K-means on the rows of U.
ClusterAssignment cluster_data_driven(const HandoverCounts& counts, std::size_t n_clusters, std::uint64_t seed,
                                      const ClusterOptions& options = {}, GraphArtifacts* artifacts = nullptr);

// Constrained K-means straight on (lat, lon).
ClusterAssignment cluster_geographic(const std::vector<Station>& stations, std::size_t n_clusters,
                                     std::uint64_t seed, const ClusterOptions& options = {});

// Hubert-Arabie adjusted Rand index of two partitions of the same set.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace edgemind::clustering
