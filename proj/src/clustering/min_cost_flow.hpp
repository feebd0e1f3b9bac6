#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

namespace edgemind::clustering::detail {

// Successive shortest paths with Johnson potentials and an O(V^2)
// Dijkstra; sized for dense transportation problems with a few hundred
// nodes. Arc costs must be non-negative.
class MinCostFlow {
 public:
  explicit MinCostFlow(std::size_t nodes) : adj_(nodes) {}

  std::size_t add_arc(std::size_t from, std::size_t to, long capacity, double cost) {
    adj_[from].push_back(arcs_.size());
    arcs_.push_back({to, capacity, cost});
    adj_[to].push_back(arcs_.size());
    arcs_.push_back({from, 0, -cost});
    return arcs_.size() - 2;
  }

  // Pushes up to `want` units; returns the amount sent.
  long solve(std::size_t source, std::size_t sink, long want) {
    const std::size_t n = adj_.size();
    std::vector<double> potential(n, 0.0), dist(n);
    std::vector<std::size_t> via(n);
    std::vector<bool> done(n);
    constexpr double inf = std::numeric_limits<double>::infinity();
    long sent = 0;
    while (sent < want) {
      std::fill(dist.begin(), dist.end(), inf);
      std::fill(done.begin(), done.end(), false);
      dist[source] = 0.0;
      while (true) {
        std::size_t u = n;
        for (std::size_t v = 0; v < n; ++v) {
          if (!done[v] && dist[v] < inf && (u == n || dist[v] < dist[u])) u = v;
        }
        if (u == n) break;
        done[u] = true;
        for (std::size_t a : adj_[u]) {
          const auto& arc = arcs_[a];
          if (arc.capacity <= 0 || done[arc.to]) continue;
          const double reduced = std::max(0.0, arc.cost + potential[u] - potential[arc.to]);
          if (dist[u] + reduced < dist[arc.to]) {
            dist[arc.to] = dist[u] + reduced;
            via[arc.to] = a;
          }
        }
      }
      if (!(dist[sink] < inf)) break;
      for (std::size_t v = 0; v < n; ++v) {
        if (dist[v] < inf) potential[v] += dist[v];
      }
      long push = want - sent;
      for (std::size_t v = sink; v != source; v = arcs_[via[v] ^ 1].to) push = std::min(push, arcs_[via[v]].capacity);
      for (std::size_t v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
        arcs_[via[v]].capacity -= push;
        arcs_[via[v] ^ 1].capacity += push;
      }
      sent += push;
    }
    return sent;
  }

  long flow(std::size_t arc) const { return arcs_[arc ^ 1].capacity; }

 private:
  struct Arc {
    std::size_t to;
    long capacity;
    double cost;
  };
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Arc> arcs_;
};

}  // namespace edgemind::clustering::detail
