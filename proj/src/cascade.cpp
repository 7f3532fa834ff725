#include "mptn/cascade.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <fmt/core.h>

#include "mptn/error.hpp"
#include "mptn/rng.hpp"

namespace mptn {
namespace {

// Routes all trips bound for one destination. Next hops are the smallest-id
// out-neighbour one step closer to the destination, which makes every trip
// follow its lexicographically smallest shortest path; the hops form a tree,
// so trips can be pushed towards the root in order of decreasing distance.
class TargetRouter {
 public:
  explicit TargetRouter(std::size_t n) : flow_(n, 0) {}

  void route(const MultilayerGraph& g, NodeIndex target, const OdGroup* group, Survivors alive,
             std::vector<std::uint64_t>& edge_load) {
    const auto order = bfs(g, target, dist_, alive, /*reverse=*/true);
    if (order.size() <= 1) return;
    for (auto u : order) flow_[u] = 0;
    if (group == nullptr) {
      for (auto u : order) flow_[u] = u == target ? 0 : 1;
    } else {
      for (const auto& [s, trips] : group->sources) {
        if (s != target && dist_[s] != kUnreached) flow_[s] += trips;
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto u = *it;
      if (u == target || flow_[u] == 0) continue;
      for (const auto& arc : g.out(u)) {
        if (!alive.edge(arc.edge) || !alive.node(arc.node)) continue;
        if (dist_[arc.node] != kUnreached && dist_[arc.node] == dist_[u] - 1) {
          edge_load[arc.edge] += flow_[u];
          flow_[arc.node] += flow_[u];
          break;
        }
      }
    }
  }

 private:
  std::vector<std::int32_t> dist_;
  std::vector<std::uint64_t> flow_;
};

std::vector<double> to_real(const std::vector<std::uint64_t>& counts) {
  return {counts.begin(), counts.end()};
}

std::size_t target_count(const MultilayerGraph& g, const OdSet& od) {
  return od.all_pairs ? g.node_count() : od.groups.size();
}

CascadeState cascade_impl(const MultilayerGraph& g, const LoadModel& loads, double beta,
                          std::span<const NodeIndex> initial_failures, bool parallel) {
  if (!(beta >= 0.0)) throw InputError("tolerance beta must be non-negative");
  if (loads.edge_load.size() != g.edge_count()) throw InputError("load model does not match graph");
  CascadeState st;
  st.beta = beta;
  st.edges_initial = g.edge_count();
  st.capacities.resize(g.edge_count());
  for (std::size_t k = 0; k < g.edge_count(); ++k) st.capacities[k] = (1.0 + beta) * loads.edge_load[k];

  std::vector<std::uint8_t> node_alive(g.node_count(), 1);
  std::vector<std::uint8_t> edge_alive(g.edge_count(), 1);
  for (auto v : initial_failures) {
    if (v >= g.node_count()) throw InputError("initial failure out of range");
    if (!node_alive[v]) continue;
    node_alive[v] = 0;
    st.failed_nodes.push_back(v);
  }
  std::sort(st.failed_nodes.begin(), st.failed_nodes.end());
  for (EdgeIndex k = 0; k < g.edge_count(); ++k) {
    const auto& e = g.edge(k);
    if (!node_alive[e.src] || !node_alive[e.dst]) {
      edge_alive[k] = 0;
      st.removed_edges.push_back(k);
    }
  }

  if (!st.failed_nodes.empty()) {
    while (true) {
      const Survivors alive{node_alive, edge_alive};
      const auto current = parallel ? route_loads(g, loads.od, alive) : route_loads_serial(g, loads.od, alive);
      std::vector<EdgeIndex> failed;
      for (EdgeIndex k = 0; k < g.edge_count(); ++k) {
        if (edge_alive[k] && current[k] > st.capacities[k]) failed.push_back(k);
      }
      if (failed.empty()) break;
      for (auto k : failed) edge_alive[k] = 0;
      st.rounds.push_back(std::move(failed));
    }
  }

  std::size_t overloaded = 0;
  for (const auto& r : st.rounds) overloaded += r.size();
  st.edges_failed = st.removed_edges.size() + overloaded;
  st.r_recover = st.edges_initial == 0
                     ? 1.0
                     : 1.0 - static_cast<double>(st.edges_failed) / static_cast<double>(st.edges_initial);
  st.first_wave_fraction =
      overloaded == 0 ? 0.0 : static_cast<double>(st.rounds.front().size()) / static_cast<double>(overloaded);
  st.total_damage = st.failed_nodes.size() + st.edges_failed;
  return st;
}

}  // namespace

std::vector<double> route_loads(const MultilayerGraph& g, const OdSet& od, Survivors alive) {
  const auto m = g.edge_count();
  const auto targets = target_count(g, od);
  std::vector<std::uint64_t> total(m, 0);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(m, 0);
    TargetRouter router(g.node_count());
#pragma omp for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(targets); ++i) {
      if (od.all_pairs) {
        router.route(g, static_cast<NodeIndex>(i), nullptr, alive, local);
      } else {
        router.route(g, od.groups[i].target, &od.groups[i], alive, local);
      }
    }
    // Integer counts: the merge order does not affect the result.
#pragma omp critical(mptn_route_merge)
    for (std::size_t k = 0; k < m; ++k) total[k] += local[k];
  }
  return to_real(total);
}

std::vector<double> route_loads_serial(const MultilayerGraph& g, const OdSet& od, Survivors alive) {
  std::vector<std::uint64_t> total(g.edge_count(), 0);
  std::vector<std::int32_t> dist;
  auto trace = [&](NodeIndex s, NodeIndex t, std::uint64_t trips) {
    if (s == t || dist[s] == kUnreached) return;
    auto u = s;
    while (u != t) {
      bool moved = false;
      for (const auto& arc : g.out(u)) {
        if (!alive.edge(arc.edge) || !alive.node(arc.node)) continue;
        if (dist[arc.node] != kUnreached && dist[arc.node] == dist[u] - 1) {
          total[arc.edge] += trips;
          u = arc.node;
          moved = true;
          break;
        }
      }
      if (!moved) throw NumericalError("shortest-path trace lost its way");
    }
  };
  if (od.all_pairs) {
    for (NodeIndex t = 0; t < g.node_count(); ++t) {
      bfs(g, t, dist, alive, true);
      for (NodeIndex s = 0; s < g.node_count(); ++s) trace(s, t, 1);
    }
  } else {
    for (const auto& group : od.groups) {
      bfs(g, group.target, dist, alive, true);
      for (const auto& [s, trips] : group.sources) trace(s, group.target, trips);
    }
  }
  return to_real(total);
}

LoadModel estimate_loads(const MultilayerGraph& g, std::size_t od_samples, std::uint64_t seed,
                         bool exhaustive) {
  const auto n = g.node_count();
  std::vector<std::uint64_t> reach(n, 0);
#pragma omp parallel
  {
    std::vector<std::int32_t> dist;
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(n); ++s) {
      reach[s] = bfs(g, static_cast<NodeIndex>(s), dist).size() - 1;
    }
  }
  std::vector<std::uint64_t> cumulative(n + 1, 0);
  for (std::size_t s = 0; s < n; ++s) cumulative[s + 1] = cumulative[s] + reach[s];
  const auto connected = cumulative[n];
  if (connected == 0) throw InputError("graph has no connected origin-destination pair");

  LoadModel model;
  model.seed = seed;
  model.exhaustive = exhaustive;
  if (exhaustive) {
    model.od.all_pairs = true;
    model.od_samples = connected;
  } else {
    if (od_samples == 0) throw InputError("od_samples must be at least 1");
    model.od_samples = od_samples;
    Rng rng(seed);
    std::map<NodeIndex, std::vector<std::uint64_t>> ranks;  // source -> ranks among its reachable set
    for (std::size_t i = 0; i < od_samples; ++i) {
      const auto k = rng.below(connected);
      const auto s = static_cast<NodeIndex>(
          std::upper_bound(cumulative.begin(), cumulative.end(), k) - cumulative.begin() - 1);
      ranks[s].push_back(k - cumulative[s]);
    }
    std::map<NodeIndex, std::map<NodeIndex, std::uint32_t>> by_target;
    std::vector<std::int32_t> dist;
    for (const auto& [s, rs] : ranks) {
      auto reached = bfs(g, s, dist);
      reached.erase(std::remove(reached.begin(), reached.end(), s), reached.end());
      std::sort(reached.begin(), reached.end());
      for (auto r : rs) by_target[reached[r]][s] += 1;
    }
    for (const auto& [t, sources] : by_target) {
      OdGroup group{t, {}};
      for (const auto& [s, trips] : sources) group.sources.emplace_back(s, trips);
      model.od.groups.push_back(std::move(group));
    }
  }
  model.edge_load = route_loads(g, model.od);
  return model;
}

CascadeState run_cascade(const MultilayerGraph& g, const LoadModel& loads, double beta,
                         std::span<const NodeIndex> initial_failures) {
  return cascade_impl(g, loads, beta, initial_failures, true);
}

CascadeState run_cascade_serial(const MultilayerGraph& g, const LoadModel& loads, double beta,
                                std::span<const NodeIndex> initial_failures) {
  return cascade_impl(g, loads, beta, initial_failures, false);
}

std::vector<double> recoverability_profile(const MultilayerGraph& g, const LoadModel& loads,
                                           double beta) {
  std::vector<double> out(g.node_count(), 1.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t v = 0; v < static_cast<std::ptrdiff_t>(g.node_count()); ++v) {
    const NodeIndex seed_node = static_cast<NodeIndex>(v);
    // Nested regions run single-threaded, so each cascade is private to its thread.
    out[v] = cascade_impl(g, loads, beta, std::span(&seed_node, 1), true).r_recover;
  }
  return out;
}

std::vector<double> recoverability_profile_serial(const MultilayerGraph& g, const LoadModel& loads,
                                                  double beta) {
  std::vector<double> out(g.node_count(), 1.0);
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    out[v] = cascade_impl(g, loads, beta, std::span(&v, 1), false).r_recover;
  }
  return out;
}

std::vector<SweepPoint> beta_sweep(const MultilayerGraph& g, const LoadModel& loads,
                                   std::span<const double> betas, NodeIndex target) {
  if (betas.empty()) throw InputError("beta sweep needs at least one value");
  if (!std::is_sorted(betas.begin(), betas.end())) throw InputError("beta sweep values must ascend");
  if (target >= g.node_count()) throw InputError("beta sweep target out of range");
  std::vector<SweepPoint> out;
  for (double b : betas) out.push_back({b, run_cascade(g, loads, b, std::span(&target, 1)).total_damage});
  return out;
}

std::vector<double> node_throughput(const MultilayerGraph& g, const LoadModel& loads) {
  std::vector<double> t(g.node_count(), 0.0);
  for (EdgeIndex k = 0; k < g.edge_count(); ++k) {
    t[g.edge(k).src] += loads.edge_load[k];
    t[g.edge(k).dst] += loads.edge_load[k];
  }
  return t;
}

std::vector<NodeIndex> throughput_ranking(const MultilayerGraph& g, const LoadModel& loads) {
  const auto t = node_throughput(g, loads);
  std::vector<NodeIndex> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) { return t[a] > t[b]; });
  return order;
}

std::vector<SweepPoint> shock_sweep(const MultilayerGraph& g, const LoadModel& loads, double beta,
                                    std::span<const std::size_t> ks) {
  if (!std::is_sorted(ks.begin(), ks.end())) throw InputError("shock sizes must ascend");
  const auto ranking = throughput_ranking(g, loads);
  std::vector<SweepPoint> out;
  for (auto k : ks) {
    if (k > g.node_count()) {
      throw InputError(fmt::format("shock size {} exceeds node count {}", k, g.node_count()));
    }
    const auto state = run_cascade(g, loads, beta, std::span(ranking.data(), k));
    out.push_back({static_cast<double>(k), state.total_damage});
  }
  return out;
}

}  // namespace mptn
