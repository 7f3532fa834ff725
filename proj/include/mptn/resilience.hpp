#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mptn/graph.hpp"

namespace mptn {

enum class AttackKind { Random, DegreeTargeted, BetweennessTargeted, MotifImportance };

std::string_view to_string(AttackKind kind);
std::optional<AttackKind> parse_attack_kind(std::string_view text);

struct AttackStrategy {
  AttackKind kind = AttackKind::Random;
  std::uint64_t seed = 0;  // Random only
  bool adaptive = false;   // targeted kinds only: recompute the metric after each removal

  static AttackStrategy random(std::uint64_t seed) { return {AttackKind::Random, seed, false}; }
  static AttackStrategy targeted(AttackKind kind, bool adaptive = false) { return {kind, 0, adaptive}; }
};

/// Full removal order. Targeted kinds sort by descending metric with ascending
/// id among ties; Random is a seeded shuffle.
std::vector<NodeIndex> attack_order(const MultilayerGraph& g, const AttackStrategy& strategy);

/// Largest weak component size (divided by the original node count) after
/// each successive removal; element 0 is the intact graph, so the result has
/// N + 1 entries.
std::vector<double> lcc_trajectory(const MultilayerGraph& g, std::span<const NodeIndex> order);
/// Reference: recomputes the component structure from scratch at every step.
std::vector<double> lcc_trajectory_serial(const MultilayerGraph& g, std::span<const NodeIndex> order);

struct CurvePoint {
  double q = 0.0;
  double s = 0.0;
};

struct DegradationCurve {
  std::vector<CurvePoint> points;
  double r_b = 0.0;
};

/// Removes nodes one at a time in attack order. r_b is the Riemann sum
/// (1/N) * sum of S after each removal. Random curves average `repeats`
/// shuffles seeded from the strategy seed; targeted curves ignore `repeats`.
DegradationCurve degradation_curve(const MultilayerGraph& g, const AttackStrategy& strategy,
                                   std::size_t repeats = 1);
DegradationCurve degradation_curve_serial(const MultilayerGraph& g, const AttackStrategy& strategy,
                                          std::size_t repeats = 1);

enum class RelocationModel { Symmetric, Asymmetric };

std::string_view to_string(RelocationModel model);
std::optional<RelocationModel> parse_relocation_model(std::string_view text);

struct RelocationResult {
  /// R_l(v) for evaluated nodes; nullopt for nodes without descendants or
  /// outside the sample.
  std::vector<std::optional<double>> per_node;
  /// Mean over evaluated nodes; NaN when nothing was evaluated.
  double network_rl = 0.0;
  double d_max = 0.0;
  RelocationModel model = RelocationModel::Symmetric;
  /// False for the asymmetric model on a single-mode graph.
  bool applicable = true;
};

/// Relocation rate. For every descendant n of v (reachable from v in the
/// intact graph), the candidate neighbours of v are those within d_max
/// (any mode for Symmetric, a different mode for Asymmetric) that still reach
/// n once v is removed; the nearest such neighbour u*_n contributes
/// 1 - d(v, u*_n) / d_max and an unreachable n contributes 0.
RelocationResult relocation_rate(const MultilayerGraph& g, double d_max, RelocationModel model,
                                 std::span<const NodeIndex> sample = {});
RelocationResult relocation_rate_serial(const MultilayerGraph& g, double d_max,
                                        RelocationModel model,
                                        std::span<const NodeIndex> sample = {});

}  // namespace mptn
