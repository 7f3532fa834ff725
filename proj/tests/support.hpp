#pragma once

// Small builders shared by the unit tests.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mptn/geo.hpp"
#include "mptn/graph.hpp"
#include "mptn/rng.hpp"
#include "mptn/synth.hpp"

namespace testing {

inline constexpr mptn::LatLon kOrigin{30.5, 114.3};

// Stations laid out west to east, 1 km apart, all one mode unless given.
inline std::vector<mptn::Station> line_stations(const std::vector<std::string>& ids,
                                                mptn::Mode mode = mptn::Mode::Metro) {
  std::vector<mptn::Station> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto p = mptn::offset_position(kOrigin, 1000.0 * static_cast<double>(i), 0.0);
    out.push_back({ids[i], mode, p.lat, p.lon, true});
  }
  return out;
}

inline mptn::MultilayerGraph graph_at(std::vector<mptn::Station> stations,
                                      const std::vector<std::pair<std::string, std::string>>& arcs,
                                      double d_imt = 0.0) {
  std::vector<mptn::Station> copy = stations;
  std::vector<mptn::EdgeRecord> records;
  auto pos = [&](const std::string& id) {
    for (const auto& s : copy) {
      if (s.id == id) return s;
    }
    return mptn::Station{};
  };
  for (const auto& [a, b] : arcs) {
    const auto sa = pos(a);
    const auto sb = pos(b);
    const auto kind = sa.mode == sb.mode ? mptn::EdgeKind::IntraModal : mptn::EdgeKind::InterModal;
    records.push_back({a, b, kind, mptn::haversine(sa.position(), sb.position())});
  }
  return mptn::MultilayerGraph::from_records(std::move(stations), records, d_imt);
}

inline mptn::MultilayerGraph graph_of(const std::vector<std::string>& ids,
                                      const std::vector<std::pair<std::string, std::string>>& arcs) {
  return graph_at(line_stations(ids), arcs);
}

// Hub "h" with leaves "l1".."l4", edges both ways.
inline mptn::MultilayerGraph star() {
  std::vector<std::pair<std::string, std::string>> arcs;
  for (const char* leaf : {"l1", "l2", "l3", "l4"}) {
    arcs.emplace_back("h", leaf);
    arcs.emplace_back(leaf, "h");
  }
  return graph_of({"h", "l1", "l2", "l3", "l4"}, arcs);
}

}  // namespace testing
