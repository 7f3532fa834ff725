#pragma once

#include <cstdint>
#include <vector>

#include "mptn/graph.hpp"

namespace mptn {

/// Feed-forward loop census: every ordered triple (a, b, c) of distinct nodes
/// with a->b, b->c and a->c. Node and edge scores count participations.
struct MotifCensus {
  std::uint64_t ffl_count = 0;
  std::vector<std::uint64_t> node_score;  // by node index
  std::vector<std::uint64_t> edge_score;  // by edge index

  bool operator==(const MotifCensus&) const = default;
};

/// Walks every closing edge a->c and intersects out(a) with in(c).
MotifCensus enumerate_ffl(const MultilayerGraph& g);
MotifCensus enumerate_ffl_serial(const MultilayerGraph& g);

/// Descending motif importance score, ascending id among ties.
std::vector<NodeIndex> motif_attack_order(const MultilayerGraph& g);
std::vector<NodeIndex> motif_attack_order(const MotifCensus& census);

struct RankedEdge {
  EdgeIndex edge = 0;
  std::uint64_t score = 0;
};

/// Edges with non-zero FFL participation, highest first, at most top_k.
/// Ties keep (src, dst) order.
std::vector<RankedEdge> structural_hierarchy(const MultilayerGraph& g, std::size_t top_k);

}  // namespace mptn
