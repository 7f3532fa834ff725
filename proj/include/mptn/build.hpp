#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mptn/graph.hpp"

namespace mptn {

struct Route {
  std::string route_id;
  Mode mode = Mode::Metro;
  std::vector<std::string> stations;
};

/// Reads `id,mode,lat,lon,in_core`. Throws InputError naming the path and line.
std::vector<Station> read_stations_csv(const std::filesystem::path& path);
/// Reads `route_id,mode,seq,station_id`; routes come back sorted by id with
/// stops in ascending seq order.
std::vector<Route> read_routes_csv(const std::filesystem::path& path);

void write_stations_csv(const std::filesystem::path& path, const std::vector<Station>& stations);
void write_routes_csv(const std::filesystem::path& path, const std::vector<Route>& routes);

/// Maximal runs of consecutive in-core stations along a route (or the whole
/// route when core_only is false). Singleton runs are kept.
std::vector<std::vector<std::string>> core_segments(const Route& route,
                                                    const std::vector<Station>& stations,
                                                    bool core_only);

/// Directed intra-modal graph over the stations of the selected segments.
/// Consecutive stations of a segment become an edge weighted by the
/// haversine distance; edges shared by several routes collapse to one.
MultilayerGraph build_graph(const std::vector<Route>& routes, const std::vector<Station>& stations,
                            bool core_only);

struct TransferResult {
  MultilayerGraph graph;
  std::size_t pairs_added = 0;
};

/// Links every pair of different-mode stations within d_imt meters by two
/// inter-modal edges. Candidates come from a k-d tree over Earth-centred
/// coordinates; the haversine distance decides membership.
TransferResult add_transfer_edges(const MultilayerGraph& g, double d_imt);

/// All-pairs reference for the transfer pair set, (i, j) with i < j.
std::vector<std::pair<NodeIndex, NodeIndex>> transfer_pairs_brute_force(const MultilayerGraph& g,
                                                                        double d_imt);
std::vector<std::pair<NodeIndex, NodeIndex>> transfer_pairs(const MultilayerGraph& g, double d_imt);

/// Stations and routes restricted to the given modes.
std::pair<std::vector<Station>, std::vector<Route>> filter_modes(const std::vector<Station>& stations,
                                                                 const std::vector<Route>& routes,
                                                                 const std::vector<Mode>& modes);

}  // namespace mptn
