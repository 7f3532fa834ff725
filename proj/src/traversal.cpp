#include "mptn/traversal.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace mptn {

std::vector<NodeIndex> bfs(const MultilayerGraph& g, NodeIndex source, std::vector<std::int32_t>& dist,
                           Survivors alive, bool reverse) {
  dist.assign(g.node_count(), kUnreached);
  std::vector<NodeIndex> order;
  if (!alive.node(source)) return order;
  order.reserve(g.node_count());
  dist[source] = 0;
  order.push_back(source);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const auto u = order[head];
    for (const auto& arc : reverse ? g.in(u) : g.out(u)) {
      if (dist[arc.node] != kUnreached || !alive.edge(arc.edge) || !alive.node(arc.node)) continue;
      dist[arc.node] = dist[u] + 1;
      order.push_back(arc.node);
    }
  }
  return order;
}

void dijkstra(const MultilayerGraph& g, NodeIndex source, std::vector<double>& dist, Survivors alive) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  dist.assign(g.node_count(), inf);
  if (!alive.node(source)) return;
  using Item = std::pair<double, NodeIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& arc : g.out(u)) {
      if (!alive.edge(arc.edge) || !alive.node(arc.node)) continue;
      const double nd = d + g.edge(arc.edge).length_m;
      if (nd < dist[arc.node]) {
        dist[arc.node] = nd;
        heap.emplace(nd, arc.node);
      }
    }
  }
}

std::size_t largest_weak_component(const MultilayerGraph& g, Survivors alive) {
  const auto n = g.node_count();
  DisjointSets sets(n);
  std::size_t best = 0;
  for (NodeIndex i = 0; i < n; ++i) {
    if (alive.node(i)) best = 1;
  }
  for (EdgeIndex k = 0; k < g.edge_count(); ++k) {
    const auto& e = g.edge(k);
    if (!alive.edge(k) || !alive.node(e.src) || !alive.node(e.dst)) continue;
    best = std::max(best, sets.unite(e.src, e.dst));
  }
  return best;
}

}  // namespace mptn
