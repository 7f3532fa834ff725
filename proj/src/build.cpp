#include "mptn/build.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include <fmt/core.h>

#include "mptn/csv.hpp"
#include "mptn/error.hpp"
#include "mptn/kdtree.hpp"

namespace mptn {
namespace {

double parse_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError(fmt::format("{}: expected a number, got '{}'", where, text));
  }
  return v;
}

long long parse_int(const std::string& text, const std::string& where) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError(fmt::format("{}: expected an integer, got '{}'", where, text));
  }
  return v;
}

bool parse_bool(std::string text, const std::string& where) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw InputError(fmt::format("{}: expected a boolean, got '{}'", where, text));
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  return in;
}

void expect_header(std::istream& in, const std::filesystem::path& path,
                   const std::vector<std::string>& expected) {
  std::string line;
  if (!std::getline(in, line)) throw InputError(fmt::format("{}: empty file", path.string()));
  if (split_csv_line(line) != expected) {
    throw InputError(fmt::format("{}:1: unexpected header '{}'", path.string(), line));
  }
}

}  // namespace

std::vector<Station> read_stations_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  expect_header(in, path, {"id", "mode", "lat", "lon", "in_core"});
  std::vector<Station> out;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto where = fmt::format("{}:{}", path.string(), lineno);
    auto f = split_csv_line(line);
    if (f.size() != 5) throw InputError(fmt::format("{}: expected 5 fields", where));
    auto mode = parse_mode(f[1]);
    if (!mode) throw InputError(fmt::format("{}: unknown mode '{}'", where, f[1]));
    Station s{f[0], *mode, parse_double(f[2], where), parse_double(f[3], where),
              parse_bool(f[4], where)};
    if (!valid_coordinates(s.position())) {
      throw InputError(fmt::format("{}: coordinates out of range", where));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Route> read_routes_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  expect_header(in, path, {"route_id", "mode", "seq", "station_id"});
  struct Stop {
    long long seq;
    std::string station;
  };
  std::map<std::string, std::pair<Mode, std::vector<Stop>>> grouped;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto where = fmt::format("{}:{}", path.string(), lineno);
    auto f = split_csv_line(line);
    if (f.size() != 4) throw InputError(fmt::format("{}: expected 4 fields", where));
    auto mode = parse_mode(f[1]);
    if (!mode) throw InputError(fmt::format("{}: unknown mode '{}'", where, f[1]));
    auto [it, inserted] = grouped.try_emplace(f[0], *mode, std::vector<Stop>{});
    if (!inserted && it->second.first != *mode) {
      throw InputError(fmt::format("{}: route '{}' changes mode", where, f[0]));
    }
    it->second.second.push_back({parse_int(f[2], where), f[3]});
  }
  std::vector<Route> routes;
  for (auto& [id, entry] : grouped) {
    auto& stops = entry.second;
    std::stable_sort(stops.begin(), stops.end(),
                     [](const Stop& a, const Stop& b) { return a.seq < b.seq; });
    Route r{id, entry.first, {}};
    for (auto& s : stops) r.stations.push_back(std::move(s.station));
    routes.push_back(std::move(r));
  }
  return routes;
}

void write_stations_csv(const std::filesystem::path& path, const std::vector<Station>& stations) {
  auto out = open_output(path);
  out << "id,mode,lat,lon,in_core\n";
  for (const auto& s : stations) {
    out << s.id << ',' << to_string(s.mode) << ',' << fmt_real(s.lat) << ',' << fmt_real(s.lon)
        << ',' << (s.in_core ? "true" : "false") << '\n';
  }
}

void write_routes_csv(const std::filesystem::path& path, const std::vector<Route>& routes) {
  auto out = open_output(path);
  out << "route_id,mode,seq,station_id\n";
  for (const auto& r : routes) {
    for (std::size_t i = 0; i < r.stations.size(); ++i) {
      out << r.route_id << ',' << to_string(r.mode) << ',' << i << ',' << r.stations[i] << '\n';
    }
  }
}

std::vector<std::vector<std::string>> core_segments(const Route& route,
                                                    const std::vector<Station>& stations,
                                                    bool core_only) {
  std::unordered_map<std::string_view, const Station*> lookup;
  for (const auto& s : stations) lookup.emplace(s.id, &s);
  std::vector<std::vector<std::string>> runs;
  std::vector<std::string> current;
  for (const auto& id : route.stations) {
    auto it = lookup.find(id);
    if (it == lookup.end()) {
      throw InputError(fmt::format("route '{}' references unknown station '{}'", route.route_id, id));
    }
    if (it->second->mode != route.mode) {
      throw InputError(fmt::format("route '{}' ({}) visits station '{}' of mode {}", route.route_id,
                                   to_string(route.mode), id, to_string(it->second->mode)));
    }
    if (!core_only || it->second->in_core) {
      current.push_back(id);
    } else if (!current.empty()) {
      runs.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) runs.push_back(std::move(current));
  return runs;
}

MultilayerGraph build_graph(const std::vector<Route>& routes, const std::vector<Station>& stations,
                            bool core_only) {
  std::unordered_map<std::string_view, const Station*> lookup;
  for (const auto& s : stations) {
    if (!lookup.emplace(s.id, &s).second) {
      throw InputError(fmt::format("duplicate station id '{}'", s.id));
    }
  }
  std::set<std::string> used;
  std::set<std::pair<std::string, std::string>> links;
  for (const auto& route : routes) {
    if (route.stations.size() < 2) {
      throw InputError(fmt::format("route '{}' has fewer than two stops", route.route_id));
    }
    for (const auto& run : core_segments(route, stations, core_only)) {
      used.insert(run.begin(), run.end());
      for (std::size_t i = 0; i + 1 < run.size(); ++i) {
        if (run[i] != run[i + 1]) links.emplace(run[i], run[i + 1]);
      }
    }
  }
  std::vector<Station> nodes;
  nodes.reserve(used.size());
  for (const auto& id : used) nodes.push_back(*lookup.at(id));
  std::vector<EdgeRecord> edges;
  edges.reserve(links.size());
  for (const auto& [a, b] : links) {
    edges.push_back({a, b, EdgeKind::IntraModal,
                     haversine(lookup.at(a)->position(), lookup.at(b)->position())});
  }
  return MultilayerGraph::from_records(std::move(nodes), edges);
}

std::vector<std::pair<NodeIndex, NodeIndex>> transfer_pairs_brute_force(const MultilayerGraph& g,
                                                                        double d_imt) {
  std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
  const auto n = static_cast<NodeIndex>(g.node_count());
  for (NodeIndex i = 0; i < n; ++i) {
    for (NodeIndex j = i + 1; j < n; ++j) {
      const auto& a = g.station(i);
      const auto& b = g.station(j);
      if (a.mode != b.mode && haversine(a.position(), b.position()) <= d_imt) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

std::vector<std::pair<NodeIndex, NodeIndex>> transfer_pairs(const MultilayerGraph& g, double d_imt) {
  std::vector<KdTree3::Point> points;
  points.reserve(g.node_count());
  for (const auto& s : g.stations()) points.push_back(to_cartesian(s.position()));
  const KdTree3 tree(points);
  // Slightly widened chord radius; the haversine test below is authoritative.
  const double radius = chord_for_arc(d_imt) * (1.0 + 1e-9) + 1e-6;
  std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
  const auto n = static_cast<NodeIndex>(g.node_count());
  for (NodeIndex i = 0; i < n; ++i) {
    const auto& a = g.station(i);
    for (auto j : tree.within(points[i], radius)) {
      if (j <= i) continue;
      const auto& b = g.station(j);
      if (a.mode != b.mode && haversine(a.position(), b.position()) <= d_imt) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

TransferResult add_transfer_edges(const MultilayerGraph& g, double d_imt) {
  if (!(d_imt >= 0.0)) throw InputError("transfer threshold must be non-negative");
  auto edges = g.edges();
  std::size_t added = 0;
  for (auto [i, j] : transfer_pairs(g, d_imt)) {
    if (g.find_edge(i, j)) continue;
    const double len = haversine(g.station(i).position(), g.station(j).position());
    edges.push_back({i, j, EdgeKind::InterModal, len});
    edges.push_back({j, i, EdgeKind::InterModal, len});
    ++added;
  }
  return {MultilayerGraph::from_indexed(g.stations(), std::move(edges), d_imt),
          added};
}

std::pair<std::vector<Station>, std::vector<Route>> filter_modes(const std::vector<Station>& stations,
                                                                 const std::vector<Route>& routes,
                                                                 const std::vector<Mode>& modes) {
  auto keep = [&](Mode m) { return std::find(modes.begin(), modes.end(), m) != modes.end(); };
  std::pair<std::vector<Station>, std::vector<Route>> out;
  for (const auto& s : stations) {
    if (keep(s.mode)) out.first.push_back(s);
  }
  for (const auto& r : routes) {
    if (keep(r.mode)) out.second.push_back(r);
  }
  return out;
}

}  // namespace mptn
