#include "mptn/graph.hpp"

#include <algorithm>
#include <set>

#include <fmt/core.h>

#include "mptn/error.hpp"

namespace mptn {

std::string_view to_string(EdgeKind kind) {
  return kind == EdgeKind::IntraModal ? "intra" : "inter";
}

std::optional<EdgeKind> parse_edge_kind(std::string_view text) {
  if (text == "intra") return EdgeKind::IntraModal;
  if (text == "inter") return EdgeKind::InterModal;
  return std::nullopt;
}

MultilayerGraph MultilayerGraph::from_records(std::vector<Station> stations,
                                              const std::vector<EdgeRecord>& edges,
                                              double d_imt) {
  std::sort(stations.begin(), stations.end(),
            [](const Station& a, const Station& b) { return a.id < b.id; });
  std::unordered_map<std::string, NodeIndex> lookup;
  lookup.reserve(stations.size());
  for (std::size_t i = 0; i < stations.size(); ++i) {
    if (!lookup.emplace(stations[i].id, static_cast<NodeIndex>(i)).second) {
      throw InputError(fmt::format("duplicate station id '{}'", stations[i].id));
    }
  }
  std::vector<Edge> indexed;
  indexed.reserve(edges.size());
  for (const auto& rec : edges) {
    auto s = lookup.find(rec.src);
    auto d = lookup.find(rec.dst);
    if (s == lookup.end()) throw InputError(fmt::format("edge references unknown station '{}'", rec.src));
    if (d == lookup.end()) throw InputError(fmt::format("edge references unknown station '{}'", rec.dst));
    indexed.push_back({s->second, d->second, rec.kind, rec.length_m});
  }
  return from_indexed(std::move(stations), std::move(indexed), d_imt);
}

MultilayerGraph MultilayerGraph::from_indexed(std::vector<Station> stations,
                                              std::vector<Edge> edges, double d_imt) {
  if (!std::is_sorted(stations.begin(), stations.end(),
                      [](const Station& a, const Station& b) { return a.id < b.id; })) {
    throw InputError("station table must be sorted by id");
  }
  for (const auto& s : stations) {
    if (s.id.empty()) throw InputError("empty station id");
    if (!valid_coordinates(s.position())) {
      throw InputError(fmt::format("station '{}' has invalid coordinates ({}, {})", s.id, s.lat, s.lon));
    }
  }
  for (std::size_t i = 1; i < stations.size(); ++i) {
    if (stations[i].id == stations[i - 1].id) {
      throw InputError(fmt::format("duplicate station id '{}'", stations[i].id));
    }
  }
  const auto n = stations.size();
  for (const auto& e : edges) {
    if (e.src >= n || e.dst >= n) throw InputError("edge endpoint out of range");
    if (e.src == e.dst) {
      throw InputError(fmt::format("self-loop on station '{}'", stations[e.src].id));
    }
    if (!(e.length_m >= 0.0)) {
      throw InputError(fmt::format("edge {} -> {} has negative length", stations[e.src].id,
                                   stations[e.dst].id));
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].src == edges[i - 1].src && edges[i].dst == edges[i - 1].dst) {
      throw InputError(fmt::format("duplicate edge {} -> {}", stations[edges[i].src].id,
                                   stations[edges[i].dst].id));
    }
  }
  if (!(d_imt >= 0.0)) throw InputError("transfer threshold must be non-negative");

  MultilayerGraph g;
  g.stations_ = std::move(stations);
  g.edges_ = std::move(edges);
  g.d_imt_ = d_imt;
  g.build_index();
  return g;
}

void MultilayerGraph::build_index() {
  const auto n = stations_.size();
  index_.clear();
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) index_.emplace(stations_[i].id, static_cast<NodeIndex>(i));

  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++out_offsets_[e.src + 1];
    ++in_offsets_[e.dst + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    out_offsets_[i + 1] += out_offsets_[i];
    in_offsets_[i + 1] += in_offsets_[i];
  }
  out_arcs_.resize(edges_.size());
  in_arcs_.resize(edges_.size());
  std::vector<std::size_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  // Edges are sorted by (src, dst), so out-lists come out sorted; in-lists are
  // filled in src order, which also leaves them sorted.
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto& e = edges_[k];
    out_arcs_[out_fill[e.src]++] = {e.dst, static_cast<EdgeIndex>(k)};
    in_arcs_[in_fill[e.dst]++] = {e.src, static_cast<EdgeIndex>(k)};
  }
}

std::optional<NodeIndex> MultilayerGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeIndex> MultilayerGraph::find_edge(NodeIndex src, NodeIndex dst) const {
  auto arcs = out(src);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), dst,
                             [](const Arc& a, NodeIndex v) { return a.node < v; });
  if (it == arcs.end() || it->node != dst) return std::nullopt;
  return it->edge;
}

std::size_t MultilayerGraph::count_edges(EdgeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [kind](const Edge& e) { return e.kind == kind; }));
}

std::size_t MultilayerGraph::mode_count() const {
  std::set<Mode> modes;
  for (const auto& s : stations_) modes.insert(s.mode);
  return modes.size();
}

MultilayerGraph induced_subgraph(const MultilayerGraph& g, std::span<const std::uint8_t> keep,
                                 std::vector<NodeIndex>& original) {
  const auto n = g.node_count();
  std::vector<NodeIndex> remap(n, static_cast<NodeIndex>(-1));
  original.clear();
  std::vector<Station> stations;
  for (NodeIndex i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    remap[i] = static_cast<NodeIndex>(original.size());
    original.push_back(i);
    stations.push_back(g.station(i));
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (keep[e.src] && keep[e.dst]) edges.push_back({remap[e.src], remap[e.dst], e.kind, e.length_m});
  }
  return MultilayerGraph::from_indexed(std::move(stations), std::move(edges), g.d_imt());
}

}  // namespace mptn
