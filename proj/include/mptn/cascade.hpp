#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mptn/graph.hpp"
#include "mptn/traversal.hpp"

namespace mptn {

/// Origin-destination demand grouped by destination.
struct OdGroup {
  NodeIndex target = 0;
  std::vector<std::pair<NodeIndex, std::uint32_t>> sources;  // (origin, trips), ascending origin
};

struct OdSet {
  /// Every ordered pair carries one trip; `groups` is unused.
  bool all_pairs = false;
  std::vector<OdGroup> groups;  // ascending target
};

struct LoadModel {
  std::vector<double> edge_load;  // by edge index
  OdSet od;
  std::size_t od_samples = 0;
  std::uint64_t seed = 0;
  bool exhaustive = false;
};

inline constexpr std::size_t kDefaultOdSamples = 10'000;
inline constexpr std::uint64_t kDefaultOdSeed = 42;

/// Unit flows along shortest hop paths. Each trip follows the shortest path
/// whose node-id sequence is lexicographically smallest. Sampled mode draws
/// od_samples pairs uniformly (with replacement) from the connected ordered
/// pairs; exhaustive mode routes every connected ordered pair once.
/// Throws InputError when the graph has no connected pair.
LoadModel estimate_loads(const MultilayerGraph& g, std::size_t od_samples, std::uint64_t seed,
                         bool exhaustive);

/// Routes `od` over the surviving part of `g`; trips whose endpoints are
/// disconnected are dropped.
std::vector<double> route_loads(const MultilayerGraph& g, const OdSet& od, Survivors alive = {});
/// Reference: traces each trip hop by hop instead of accumulating per-target trees.
std::vector<double> route_loads_serial(const MultilayerGraph& g, const OdSet& od,
                                       Survivors alive = {});

struct CascadeState {
  double beta = 0.0;
  std::vector<double> capacities;               // (1 + beta) * intact load, by edge
  std::vector<NodeIndex> failed_nodes;          // the initial failures
  std::vector<EdgeIndex> removed_edges;         // incident to failed nodes
  std::vector<std::vector<EdgeIndex>> rounds;   // overload failures per round
  std::size_t edges_initial = 0;
  std::size_t edges_failed = 0;                 // removed + overloaded
  double r_recover = 1.0;
  /// First overload round / all overload failures; 0 without overloads.
  double first_wave_fraction = 0.0;
  std::size_t total_damage = 0;                 // failed nodes + failed edges
};

/// Load-capacity cascade: after removing the initial nodes, loads are
/// re-routed over the survivors each round and every edge whose load exceeds
/// its frozen capacity fails, until a round fails nothing.
CascadeState run_cascade(const MultilayerGraph& g, const LoadModel& loads, double beta,
                         std::span<const NodeIndex> initial_failures);
CascadeState run_cascade_serial(const MultilayerGraph& g, const LoadModel& loads, double beta,
                                std::span<const NodeIndex> initial_failures);

/// R_recover for every node as the single initial failure.
std::vector<double> recoverability_profile(const MultilayerGraph& g, const LoadModel& loads,
                                           double beta);
std::vector<double> recoverability_profile_serial(const MultilayerGraph& g, const LoadModel& loads,
                                                  double beta);

struct SweepPoint {
  double x = 0.0;
  std::size_t damage = 0;
};

/// Total damage of the cascade seeded at `target` for each tolerance.
std::vector<SweepPoint> beta_sweep(const MultilayerGraph& g, const LoadModel& loads,
                                   std::span<const double> betas, NodeIndex target);

/// Sum of loads on edges entering or leaving each node.
std::vector<double> node_throughput(const MultilayerGraph& g, const LoadModel& loads);
/// Nodes by descending throughput, ascending id among ties.
std::vector<NodeIndex> throughput_ranking(const MultilayerGraph& g, const LoadModel& loads);

/// Total damage when the top-k nodes by throughput fail together.
std::vector<SweepPoint> shock_sweep(const MultilayerGraph& g, const LoadModel& loads, double beta,
                                    std::span<const std::size_t> ks);

}  // namespace mptn
