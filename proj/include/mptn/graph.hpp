#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mptn/geo.hpp"

namespace mptn {

using NodeIndex = std::uint32_t;
using EdgeIndex = std::uint32_t;

enum class EdgeKind { IntraModal, InterModal };

std::string_view to_string(EdgeKind kind);
std::optional<EdgeKind> parse_edge_kind(std::string_view text);

struct Station {
  std::string id;
  Mode mode = Mode::Metro;
  double lat = 0.0;
  double lon = 0.0;
  bool in_core = true;

  LatLon position() const { return {lat, lon}; }
  bool operator==(const Station&) const = default;
};

/// Directed edge between two stations, referenced by their index in the graph.
struct Edge {
  NodeIndex src = 0;
  NodeIndex dst = 0;
  EdgeKind kind = EdgeKind::IntraModal;
  double length_m = 0.0;

  bool operator==(const Edge&) const = default;
};

/// Edge keyed by station ids, used when assembling a graph from records.
struct EdgeRecord {
  std::string src;
  std::string dst;
  EdgeKind kind = EdgeKind::IntraModal;
  double length_m = 0.0;
};

/// One adjacency entry: the neighbouring node and the edge that reaches it.
struct Arc {
  NodeIndex node = 0;
  EdgeIndex edge = 0;
};

/// Immutable directed multimodal station graph.
///
/// Stations are stored sorted by id, so comparing node indices is the same as
/// comparing ids lexicographically. Edges are sorted by (src, dst) and at most
/// one edge exists per ordered pair; adjacency lists are sorted by neighbour.
class MultilayerGraph {
 public:
  MultilayerGraph() = default;

  /// Throws InputError on duplicate ids, invalid coordinates, unknown
  /// endpoints, self-loops or duplicate edges.
  static MultilayerGraph from_records(std::vector<Station> stations,
                                      const std::vector<EdgeRecord>& edges, double d_imt = 0.0);

  /// Same checks as from_records for graphs whose station table is already
  /// known; edges reference positions in the sorted station table.
  static MultilayerGraph from_indexed(std::vector<Station> stations, std::vector<Edge> edges,
                                      double d_imt = 0.0);

  std::size_t node_count() const { return stations_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return stations_.empty(); }

  const std::vector<Station>& stations() const { return stations_; }
  const Station& station(NodeIndex i) const { return stations_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_[e]; }
  double d_imt() const { return d_imt_; }

  std::optional<NodeIndex> find(std::string_view id) const;
  std::optional<EdgeIndex> find_edge(NodeIndex src, NodeIndex dst) const;

  std::span<const Arc> out(NodeIndex i) const {
    return {out_arcs_.data() + out_offsets_[i], out_arcs_.data() + out_offsets_[i + 1]};
  }
  std::span<const Arc> in(NodeIndex i) const {
    return {in_arcs_.data() + in_offsets_[i], in_arcs_.data() + in_offsets_[i + 1]};
  }
  std::size_t out_degree(NodeIndex i) const { return out_offsets_[i + 1] - out_offsets_[i]; }
  std::size_t in_degree(NodeIndex i) const { return in_offsets_[i + 1] - in_offsets_[i]; }
  std::size_t degree(NodeIndex i) const { return out_degree(i) + in_degree(i); }

  std::size_t count_edges(EdgeKind kind) const;
  /// Number of distinct modes present among the stations.
  std::size_t mode_count() const;

  bool operator==(const MultilayerGraph& other) const {
    return stations_ == other.stations_ && edges_ == other.edges_ && d_imt_ == other.d_imt_;
  }

 private:
  void build_index();

  std::vector<Station> stations_;
  std::vector<Edge> edges_;
  double d_imt_ = 0.0;

  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<Arc> out_arcs_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<Arc> in_arcs_;
};

/// Subgraph on the nodes with keep[i] != 0; `original` receives, for every
/// node of the result, its index in `g`.
MultilayerGraph induced_subgraph(const MultilayerGraph& g, std::span<const std::uint8_t> keep,
                                 std::vector<NodeIndex>& original);

}  // namespace mptn
