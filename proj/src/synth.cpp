#include "mptn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <fmt/core.h>

#include "mptn/error.hpp"
#include "mptn/rng.hpp"

namespace mptn {
namespace {

constexpr LatLon kCityCentre{30.55, 114.30};
constexpr double kMetersPerDegree = kEarthRadiusM * std::numbers::pi / 180.0;

struct Planar {
  double x;
  double y;
};

void add_both_directions(std::vector<Route>& routes, const std::string& base, Mode mode,
                         const std::vector<std::string>& stops) {
  if (stops.size() < 2) return;
  routes.push_back({base + "-f", mode, stops});
  routes.push_back({base + "-b", mode, {stops.rbegin(), stops.rend()}});
}

std::vector<Station> random_stations(std::size_t n, Rng& rng, std::size_t n_modes, double extent_km) {
  const auto width = std::to_string(n == 0 ? 0 : n - 1).size();
  std::vector<Station> stations;
  const double half = extent_km * 500.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto pos = offset_position(kCityCentre, rng.uniform(-half, half), rng.uniform(-half, half));
    stations.push_back({fmt::format("n{:0{}}", i, width), kAllModes[i % std::max<std::size_t>(1, n_modes)],
                        pos.lat, pos.lon, true});
  }
  return stations;
}

}  // namespace

LatLon offset_position(LatLon origin, double east_m, double north_m) {
  const double lat = origin.lat + north_m / kMetersPerDegree;
  const double lon =
      origin.lon + east_m / (kMetersPerDegree * std::cos(origin.lat * std::numbers::pi / 180.0));
  return {lat, lon};
}

SyntheticCity generate_city(const SyntheticCitySpec& spec) {
  if (!(spec.area_km > 0.0)) throw InputError("city area must be positive");
  Rng rng(spec.seed);
  const double side = spec.area_km * 1000.0;
  SyntheticCity city;
  std::vector<Planar> bus_xy;

  // Bus: jittered grid.
  std::vector<std::string> bus_ids;
  if (spec.n_bus > 0) {
    const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(spec.n_bus))));
    const auto rows = (spec.n_bus + cols - 1) / cols;
    const double spacing = side / static_cast<double>(cols);
    for (std::size_t i = 0; i < spec.n_bus; ++i) {
      const auto r = i / cols, c = i % cols;
      bus_xy.push_back({(static_cast<double>(c) - (cols - 1) / 2.0) * spacing + rng.uniform(-0.15, 0.15) * spacing,
                        (static_cast<double>(r) - (rows - 1) / 2.0) * spacing + rng.uniform(-0.15, 0.15) * spacing});
      bus_ids.push_back(fmt::format("B{:04}", i));
    }
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::string> stops;
      for (std::size_t c = 0; c < cols && r * cols + c < spec.n_bus; ++c) stops.push_back(bus_ids[r * cols + c]);
      add_both_directions(city.routes, fmt::format("bus-row{:03}", r), Mode::Bus, stops);
    }
    for (std::size_t c = 0; c < cols; ++c) {
      std::vector<std::string> stops;
      for (std::size_t r = 0; r < rows && r * cols + c < spec.n_bus; ++r) stops.push_back(bus_ids[r * cols + c]);
      add_both_directions(city.routes, fmt::format("bus-col{:03}", c), Mode::Bus, stops);
    }
    // Two diagonal trunk lines; each diagonal hop closes triangles with the grid.
    std::vector<std::string> diag, anti;
    for (std::size_t r = 0; r < std::min(rows, cols); ++r) {
      if (r * cols + r < spec.n_bus) diag.push_back(bus_ids[r * cols + r]);
      if (r * cols + (cols - 1 - r) < spec.n_bus) anti.push_back(bus_ids[r * cols + (cols - 1 - r)]);
    }
    add_both_directions(city.routes, "bus-diag1", Mode::Bus, diag);
    add_both_directions(city.routes, "bus-diag2", Mode::Bus, anti);
  }

  std::vector<Planar> hubs;  // rail-based stations that may attract a feeder bus stop
  std::vector<std::pair<Station, Planar>> placed;
  auto place = [&](std::string id, Mode mode, Planar p) {
    const auto pos = offset_position(kCityCentre, p.x, p.y);
    placed.push_back({Station{std::move(id), mode, pos.lat, pos.lon, true}, p});
    hubs.push_back(p);
  };

  // Metro: radial lines sharing the central station.
  if (spec.n_metro > 0) {
    const std::size_t lines = spec.n_metro >= 9 ? 3 : (spec.n_metro >= 4 ? 2 : 1);
    std::vector<std::size_t> per_line(lines, (spec.n_metro - 1) / lines);
    for (std::size_t l = 0; l < (spec.n_metro - 1) % lines; ++l) ++per_line[l];
    const auto longest = *std::max_element(per_line.begin(), per_line.end());
    const double spacing = 0.45 * side / static_cast<double>(std::max<std::size_t>(1, (longest + 1) / 2));
    place("M000", Mode::Metro, {0.0, 0.0});
    std::size_t next = 1;
    for (std::size_t l = 0; l < lines; ++l) {
      const double theta = std::numbers::pi * (static_cast<double>(l) + 0.25) / static_cast<double>(lines);
      const auto neg = per_line[l] / 2, pos = per_line[l] - neg;
      std::vector<std::string> stops;
      for (std::size_t j = neg; j >= 1; --j) {
        const double t = -static_cast<double>(j) * spacing;
        auto id = fmt::format("M{:03}", next++);
        place(id, Mode::Metro, {t * std::cos(theta), t * std::sin(theta)});
        stops.push_back(id);
      }
      stops.push_back("M000");
      for (std::size_t j = 1; j <= pos; ++j) {
        const double t = static_cast<double>(j) * spacing;
        auto id = fmt::format("M{:03}", next++);
        place(id, Mode::Metro, {t * std::cos(theta), t * std::sin(theta)});
        stops.push_back(id);
      }
      add_both_directions(city.routes, fmt::format("metro-{}", l + 1), Mode::Metro, stops);
    }
  }

  // Ferry and rail: short straight arteries.
  auto artery = [&](std::size_t count, Mode mode, const char* prefix, const char* route, Planar start,
                    Planar step) {
    std::vector<std::string> stops;
    for (std::size_t i = 0; i < count; ++i) {
      auto id = fmt::format("{}{:02}", prefix, i);
      place(id, mode, {start.x + step.x * static_cast<double>(i), start.y + step.y * static_cast<double>(i)});
      stops.push_back(id);
    }
    add_both_directions(city.routes, route, mode, stops);
  };
  const double ferry_step = std::min(1200.0, 0.8 * side / static_cast<double>(std::max<std::size_t>(1, spec.n_ferry)));
  artery(spec.n_ferry, Mode::Ferry, "F", "ferry-1", {-0.35 * side, 0.2 * side}, {ferry_step, 0.15 * ferry_step});
  const double rail_step = std::min(2000.0, 0.8 * side / static_cast<double>(std::max<std::size_t>(1, spec.n_rail)));
  artery(spec.n_rail, Mode::Railway, "R", "rail-1", {-0.3 * side, -0.3 * side}, {0.7 * rail_step, 0.7 * rail_step});

  // Feeder stops: pull the nearest free bus stop next to every other hub.
  std::set<std::size_t> moved;
  for (std::size_t h = 0; h < hubs.size() && !bus_xy.empty(); ++h) {
    const bool attract = rng.uniform() < 0.5;
    const double radius = rng.uniform(30.0, 90.0);
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    if (!attract) continue;
    std::size_t best = bus_xy.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < bus_xy.size(); ++b) {
      if (moved.count(b)) continue;
      const double d = std::hypot(bus_xy[b].x - hubs[h].x, bus_xy[b].y - hubs[h].y);
      if (d < best_d) {
        best_d = d;
        best = b;
      }
    }
    if (best == bus_xy.size()) continue;
    moved.insert(best);
    bus_xy[best] = {hubs[h].x + radius * std::cos(angle), hubs[h].y + radius * std::sin(angle)};
  }

  for (std::size_t b = 0; b < bus_xy.size(); ++b) {
    const auto pos = offset_position(kCityCentre, bus_xy[b].x, bus_xy[b].y);
    city.stations.push_back({bus_ids[b], Mode::Bus, pos.lat, pos.lon, true});
  }
  for (auto& [station, xy] : placed) city.stations.push_back(std::move(station));
  std::sort(city.stations.begin(), city.stations.end(),
            [](const Station& a, const Station& b) { return a.id < b.id; });
  std::sort(city.routes.begin(), city.routes.end(),
            [](const Route& a, const Route& b) { return a.route_id < b.route_id; });
  return city;
}

MultilayerGraph random_directed_graph(std::size_t n, double p, std::uint64_t seed, std::size_t n_modes,
                                      double extent_km) {
  Rng rng(seed);
  auto stations = random_stations(n, rng, n_modes, extent_km);
  std::vector<Edge> edges;
  for (NodeIndex i = 0; i < n; ++i) {
    for (NodeIndex j = 0; j < n; ++j) {
      if (i == j || rng.uniform() >= p) continue;
      const auto& a = stations[i];
      const auto& b = stations[j];
      edges.push_back({i, j, a.mode == b.mode ? EdgeKind::IntraModal : EdgeKind::InterModal,
                       haversine(a.position(), b.position())});
    }
  }
  return MultilayerGraph::from_indexed(std::move(stations), std::move(edges));
}

MultilayerGraph scale_free_graph(std::size_t n, std::size_t m, std::uint64_t seed, double extent_km) {
  if (m == 0 || n <= m) throw InputError("scale-free graph needs n > m >= 1");
  Rng rng(seed);
  auto stations = random_stations(n, rng, 1, extent_km);
  std::set<std::pair<NodeIndex, NodeIndex>> links;
  std::vector<NodeIndex> urn;  // each node appears once per incident link
  for (NodeIndex i = 0; i <= m; ++i) {
    for (NodeIndex j = i + 1; j <= m; ++j) {
      links.emplace(i, j);
      urn.push_back(i);
      urn.push_back(j);
    }
  }
  for (NodeIndex v = static_cast<NodeIndex>(m + 1); v < n; ++v) {
    std::set<NodeIndex> targets;
    while (targets.size() < m) targets.insert(urn[rng.below(urn.size())]);
    for (auto t : targets) {
      links.emplace(t, v);
      urn.push_back(t);
      urn.push_back(v);
    }
  }
  std::vector<Edge> edges;
  for (auto [a, b] : links) {
    const double len = haversine(stations[a].position(), stations[b].position());
    edges.push_back({a, b, EdgeKind::IntraModal, len});
    edges.push_back({b, a, EdgeKind::IntraModal, len});
  }
  return MultilayerGraph::from_indexed(std::move(stations), std::move(edges));
}

}  // namespace mptn
