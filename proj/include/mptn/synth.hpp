#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mptn/build.hpp"
#include "mptn/graph.hpp"

namespace mptn {

struct SyntheticCitySpec {
  std::size_t n_metro = 20;
  std::size_t n_bus = 200;
  std::size_t n_ferry = 3;
  std::size_t n_rail = 3;
  std::uint64_t seed = 1;
  double area_km = 8.0;
};

struct SyntheticCity {
  std::vector<Station> stations;  // sorted by id
  std::vector<Route> routes;      // sorted by route id
};

/// Deterministic multimodal city: metro lines radiating through a shared
/// central station, a jittered bus grid with row and column routes, and short
/// linear ferry and rail arteries. About half of the rail-based stations get a
/// bus stop pulled within 30-90 m of them. Every route runs in both
/// directions and every station is in the core.
SyntheticCity generate_city(const SyntheticCitySpec& spec);

/// Directed G(n, p) with random coordinates in a box of `extent_km`, modes
/// assigned round-robin over the first `n_modes` modes.
MultilayerGraph random_directed_graph(std::size_t n, double p, std::uint64_t seed,
                                      std::size_t n_modes = 1, double extent_km = 10.0);

/// Barabasi-Albert preferential attachment with `m` links per new node, each
/// link stored in both directions; single mode.
MultilayerGraph scale_free_graph(std::size_t n, std::size_t m, std::uint64_t seed,
                                 double extent_km = 10.0);

/// Local planar offset (meters east, meters north) from a reference point.
LatLon offset_position(LatLon origin, double east_m, double north_m);

}  // namespace mptn
