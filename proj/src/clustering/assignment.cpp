#include "edgemind/clustering/assignment.hpp"

#include <algorithm>
#include <map>

#include "edgemind/common/errors.hpp"

namespace edgemind::clustering {

std::string to_string(Strategy s) { return s == Strategy::data_driven ? "data-driven" : "geographic"; }

Strategy parse_strategy(const std::string& text) {
  if (text == "data-driven") return Strategy::data_driven;
  if (text == "geographic") return Strategy::geographic;
  throw ConfigError("strategy must be 'data-driven' or 'geographic', got '" + text + "'");
}

std::vector<std::size_t> ClusterAssignment::sizes() const {
  std::vector<std::size_t> out(n_clusters, 0);
  for (int l : labels) {
    if (l >= 0 && static_cast<std::size_t>(l) < n_clusters) ++out[static_cast<std::size_t>(l)];
  }
  return out;
}

std::vector<StationId> ClusterAssignment::members(int cluster) const {
  std::vector<StationId> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == cluster) out.emplace_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

void validate(const ClusterAssignment& a) {
  for (int l : a.labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= a.n_clusters) throw ShapeError("label outside 0..n_clusters-1");
  }
  for (auto s : a.sizes()) {
    if (s < a.min_size || s > a.max_size) throw ShapeError("cluster size outside [min_size, max_size]");
  }
}

nlohmann::json to_json(const ClusterAssignment& a) {
  nlohmann::json j;
  j["strategy"] = to_string(a.strategy);
  j["n_clusters"] = a.n_clusters;
  j["min_size"] = a.min_size;
  j["max_size"] = a.max_size;
  j["labels"] = a.labels;
  if (a.source_window) {
    j["source_window"] = {{"start", a.source_window->start}, {"len", a.source_window->len}};
  } else {
    j["source_window"] = "static";
  }
  return j;
}

ClusterAssignment assignment_from_json(const nlohmann::json& j) {
  ClusterAssignment a;
  try {
    a.strategy = parse_strategy(j.at("strategy").get<std::string>());
    a.n_clusters = j.at("n_clusters").get<std::size_t>();
    a.min_size = j.at("min_size").get<std::size_t>();
    a.max_size = j.at("max_size").get<std::size_t>();
    a.labels = j.at("labels").get<std::vector<int>>();
    if (j.contains("source_window") && j.at("source_window").is_object()) {
      a.source_window = SourceWindow{j["source_window"].at("start").get<std::int64_t>(),
                                     j["source_window"].at("len").get<std::int64_t>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("assignment JSON: ") + e.what());
  }
  validate(a);
  return a;
}

namespace {

ClusterAssignment from_points(const Eigen::MatrixXd& points, std::size_t n_clusters, std::uint64_t seed,
                              const ClusterOptions& options, Strategy strategy) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (n_clusters < 1 || n_clusters > n) throw ConfigError("n_clusters must be in [1, N_g]");
  const SizeBounds bounds = options.bounds.value_or(default_size_bounds(n, n_clusters));
  const KMeansResult km = constrained_kmeans(points, n_clusters, bounds, seed, options.kmeans);
  ClusterAssignment a;
  a.labels = km.labels;
  a.n_clusters = n_clusters;
  a.min_size = bounds.min;
  a.max_size = bounds.max;
  a.strategy = strategy;
  return a;
}

}  // namespace

ClusterAssignment cluster_data_driven(const HandoverCounts& counts, std::size_t n_clusters, std::uint64_t seed,
                                      const ClusterOptions& options, GraphArtifacts* artifacts) {
  const auto n = static_cast<std::size_t>(counts.counts.rows());
  if (n_clusters < 1 || n_clusters > n) throw ConfigError("n_clusters must be in [1, N_g]");
  GraphArtifacts g;
  g.H = transition_matrix(counts);
  g.W = weight_graph(g.H);
  g.laplacian = normalized_laplacian(g.W);
  g.embedding = spectral_embed(g.laplacian, n_clusters);
  ClusterAssignment a = from_points(g.embedding.U, n_clusters, seed, options, Strategy::data_driven);
  a.source_window = SourceWindow{counts.window_start, counts.window_len};
  if (artifacts) *artifacts = std::move(g);
  return a;
}

ClusterAssignment cluster_geographic(const std::vector<Station>& stations, std::size_t n_clusters,
                                     std::uint64_t seed, const ClusterOptions& options) {
  Eigen::MatrixXd points(static_cast<Eigen::Index>(stations.size()), 2);
  for (std::size_t i = 0; i < stations.size(); ++i) {
    points(static_cast<Eigen::Index>(i), 0) = stations[i].lat;
    points(static_cast<Eigen::Index>(i), 1) = stations[i].lon;
  }
  return from_points(points, n_clusters, seed, options, Strategy::geographic);
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw ShapeError("partitions differ in size");
  const double n = static_cast<double>(a.size());
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    ra[a[i]] += 1.0;
    rb[b[i]] += 1.0;
  }
  auto c2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double index = 0.0, sa = 0.0, sb = 0.0;
  for (const auto& [k, v] : joint) index += c2(v);
  for (const auto& [k, v] : ra) sa += c2(v);
  for (const auto& [k, v] : rb) sb += c2(v);
  const double expected = sa * sb / c2(n);
  const double max_index = 0.5 * (sa + sb);
  if (max_index == expected) return 1.0;  // both trivial partitions
  return (index - expected) / (max_index - expected);
}

}  // namespace edgemind::clustering
