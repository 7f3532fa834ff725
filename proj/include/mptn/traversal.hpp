#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "mptn/graph.hpp"

namespace mptn {

inline constexpr std::int32_t kUnreached = -1;

/// Optional alive flags over nodes and edges; an empty span means "all alive".
struct Survivors {
  std::span<const std::uint8_t> nodes;
  std::span<const std::uint8_t> edges;

  bool node(NodeIndex i) const { return nodes.empty() || nodes[i] != 0; }
  bool edge(EdgeIndex e) const { return edges.empty() || edges[e] != 0; }
};

/// Hop distances from `source` along out-edges (in-edges when `reverse`).
/// Returns the visit order; `dist` is resized and filled with kUnreached for
/// unvisited nodes. A dead source visits nothing.
std::vector<NodeIndex> bfs(const MultilayerGraph& g, NodeIndex source, std::vector<std::int32_t>& dist,
                           Survivors alive = {}, bool reverse = false);

/// Meter distances from `source` along out-edges (Dijkstra on length_m).
void dijkstra(const MultilayerGraph& g, NodeIndex source, std::vector<double>& dist,
              Survivors alive = {});

/// Size of the largest weakly connected component among alive nodes.
std::size_t largest_weak_component(const MultilayerGraph& g, Survivors alive = {});

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  /// Returns the size of the merged set.
  std::size_t unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return size_[a];
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return size_[a];
  }
  std::size_t size_of(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace mptn
