#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "mptn/build.hpp"
#include "mptn/error.hpp"
#include "mptn/graphml.hpp"
#include "mptn/kdtree.hpp"
#include "support.hpp"

using namespace mptn;
namespace fs = std::filesystem;

namespace {

// Spherical law of cosines: a different formula for the same great-circle distance.
double cosine_law(LatLon a, LatLon b) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double c = std::sin(a.lat * rad) * std::sin(b.lat * rad) +
                   std::cos(a.lat * rad) * std::cos(b.lat * rad) * std::cos((b.lon - a.lon) * rad);
  return kEarthRadiusM * std::acos(std::clamp(c, -1.0, 1.0));
}

std::set<std::pair<std::string, std::string>> arc_set(const MultilayerGraph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& e : g.edges()) out.emplace(g.station(e.src).id, g.station(e.dst).id);
  return out;
}

Station at(const std::string& id, Mode mode, double east_m) {
  const auto p = offset_position(testing::kOrigin, east_m, 0.0);
  return {id, mode, p.lat, p.lon, true};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "mptn_netcore";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("haversine reference distances") {
  CHECK(haversine({30.5, 114.3}, {30.5, 114.3}) == 0.0);
  const double quarter = haversine({0, 0}, {0, 90});
  CHECK(std::abs(quarter - 10'007'543.0) <= 1.0);
  CHECK(std::abs(quarter - cosine_law({0, 0}, {0, 90})) <= 1.0);
  CHECK(std::abs(haversine({0, 0}, {90, 0}) - quarter) <= 1e-6);
}

TEST_CASE("haversine is symmetric and obeys the triangle inequality") {
  Rng rng(11);
  auto point = [&] { return LatLon{rng.uniform(-89.0, 89.0), rng.uniform(-179.0, 179.0)}; };
  for (int i = 0; i < 2000; ++i) {
    const auto a = point(), b = point(), c = point();
    const double ab = haversine(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab == doctest::Approx(haversine(b, a)).epsilon(1e-12));
    CHECK(ab <= (haversine(a, c) + haversine(c, b)) * (1 + 1e-6));
    // the cosine form loses precision at short range, so compare only long arcs
    if (ab > 1e5) CHECK(ab == doctest::Approx(cosine_law(a, b)).epsilon(1e-6));
  }
}

TEST_CASE("build_graph core segments") {
  auto stations = testing::line_stations({"a", "b", "c", "d"});

  SUBCASE("single in-core run") {
    const auto g = build_graph({{"r1", Mode::Metro, {"a", "b", "c"}}}, stations, true);
    CHECK(arc_set(g) == std::set<std::pair<std::string, std::string>>{{"a", "b"}, {"b", "c"}});
  }
  SUBCASE("out-of-core stop splits the route") {
    stations[1].in_core = false;
    const auto g = build_graph({{"r1", Mode::Metro, {"a", "b", "c", "d"}}}, stations, true);
    CHECK(arc_set(g) == std::set<std::pair<std::string, std::string>>{{"c", "d"}});
    CHECK_FALSE(g.find("b").has_value());
    const auto all = build_graph({{"r1", Mode::Metro, {"a", "b", "c", "d"}}}, stations, false);
    CHECK(all.edge_count() == 3);
  }
  SUBCASE("shared segments collapse") {
    const auto g = build_graph({{"r1", Mode::Metro, {"a", "b"}}, {"r2", Mode::Metro, {"a", "b", "c"}}},
                               stations, true);
    CHECK(g.edge_count() == 2);
  }
  SUBCASE("unknown station names route and station") {
    try {
      build_graph({{"r9", Mode::Metro, {"a", "zz"}}}, stations, true);
      FAIL("expected InputError");
    } catch (const InputError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("r9") != std::string::npos);
      CHECK(msg.find("zz") != std::string::npos);
    }
  }
  SUBCASE("route input order does not matter") {
    std::vector<Route> routes = {{"r1", Mode::Metro, {"a", "b", "c"}},
                                 {"r2", Mode::Metro, {"d", "c"}},
                                 {"r3", Mode::Metro, {"b", "d"}}};
    const auto g = build_graph(routes, stations, true);
    std::reverse(routes.begin(), routes.end());
    CHECK(build_graph(routes, stations, true) == g);
  }
}

TEST_CASE("transfer edges by threshold and mode") {
  const auto check = [](Station a, Station b, std::size_t pairs) {
    const auto g = MultilayerGraph::from_records({a, b}, {});
    const auto t = add_transfer_edges(g, 100.0);
    CHECK(t.pairs_added == pairs);
    CHECK(t.graph.edge_count() == 2 * pairs);
    CHECK(t.graph.d_imt() == 100.0);
  };
  check(at("m", Mode::Metro, 0), at("b", Mode::Bus, 50), 1);
  check(at("b1", Mode::Bus, 0), at("b2", Mode::Bus, 50), 0);
  check(at("m", Mode::Metro, 0), at("b", Mode::Bus, 150), 0);
}

TEST_CASE("k-d tree transfer pairs equal brute force") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const std::size_t n = std::min<std::size_t>(50 + 40 * seed, 500);
    const auto g = random_directed_graph(n, 0.0, seed, 4, 3.0);
    for (double d : {0.0, 50.0, 120.0, 400.0, 1600.0}) {
      CHECK(transfer_pairs(g, d) == transfer_pairs_brute_force(g, d));
    }
  }
}

TEST_CASE("kd tree radius query matches linear scan") {
  Rng rng(5);
  std::vector<KdTree3::Point> pts(400);
  for (auto& p : pts) p = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  const KdTree3 tree(pts);
  for (int q = 0; q < 50; ++q) {
    const KdTree3::Point c{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double r = rng.uniform(0.05, 0.8);
    std::vector<std::uint32_t> expect;
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
      const double dx = pts[i][0] - c[0], dy = pts[i][1] - c[1], dz = pts[i][2] - c[2];
      if (dx * dx + dy * dy + dz * dz <= r * r) expect.push_back(i);
    }
    CHECK(tree.within(c, r) == expect);
  }
}

TEST_CASE("built graph edge invariants") {
  const auto city = generate_city({});
  const auto g = add_transfer_edges(build_graph(city.routes, city.stations, true), 150.0).graph;
  REQUIRE(g.count_edges(EdgeKind::InterModal) > 0);
  for (const auto& e : g.edges()) {
    const auto& a = g.station(e.src);
    const auto& b = g.station(e.dst);
    if (e.kind == EdgeKind::InterModal) {
      CHECK(a.mode != b.mode);
      auto twin = g.find_edge(e.dst, e.src);
      REQUIRE(twin.has_value());
      CHECK(g.edge(*twin).kind == EdgeKind::InterModal);
    } else {
      CHECK(a.mode == b.mode);
      CHECK(e.length_m == haversine(a.position(), b.position()));
    }
  }
}

TEST_CASE("graph validation") {
  auto st = testing::line_stations({"a", "b"});
  CHECK_THROWS_AS(MultilayerGraph::from_records(st, {{"a", "a", EdgeKind::IntraModal, 0}}), InputError);
  CHECK_THROWS_AS(MultilayerGraph::from_records(st, {{"a", "q", EdgeKind::IntraModal, 0}}), InputError);
  CHECK_THROWS_AS(MultilayerGraph::from_records(st, {{"a", "b", EdgeKind::IntraModal, 1},
                                                     {"a", "b", EdgeKind::IntraModal, 1}}),
                  InputError);
  st.push_back(st[0]);
  CHECK_THROWS_AS(MultilayerGraph::from_records(st, {}), InputError);
  auto bad = testing::line_stations({"x"});
  bad[0].lat = 91;
  CHECK_THROWS_AS(MultilayerGraph::from_records(bad, {}), InputError);
}

TEST_CASE("graphml round trip") {
  SUBCASE("empty") {
    const MultilayerGraph g;
    CHECK(from_graphml(to_graphml(g)) == g);
  }
  SUBCASE("three nodes two edges") {
    const auto g = testing::graph_of({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    CHECK(from_graphml(to_graphml(g)) == g);
  }
  SUBCASE("transfer edges and d_imt preserved") {
    auto base = MultilayerGraph::from_records({at("m1", Mode::Metro, 0), at("m2", Mode::Metro, 900),
                                               at("b1", Mode::Bus, 60)},
                                              {{"m1", "m2", EdgeKind::IntraModal, 0.0}});
    const auto g = add_transfer_edges(base, 100.0).graph;
    REQUIRE(g.count_edges(EdgeKind::InterModal) == 2);
    const auto back = from_graphml(to_graphml(g));
    CHECK(back.d_imt() == 100.0);
    CHECK(back.count_edges(EdgeKind::InterModal) == 2);
    CHECK(back.stations() == g.stations());
    CHECK(back.edges() == g.edges());
  }
  SUBCASE("synthetic city through a file") {
    const auto city = generate_city({});
    const auto g = add_transfer_edges(build_graph(city.routes, city.stations, true), 100.0).graph;
    const auto path = scratch("city.graphml");
    save_graphml(path, g);
    CHECK(load_graphml(path) == g);
  }
  SUBCASE("xml special characters in ids") {
    auto st = testing::line_stations({"a&b", "<c>"});
    const auto g = testing::graph_at(st, {{"a&b", "<c>"}});
    CHECK(from_graphml(to_graphml(g)) == g);
  }
}

TEST_CASE("malformed graphml reports a line") {
  const std::string doc =
      "<?xml version=\"1.0\"?>\n<graphml>\n<graph edgedefault=\"directed\">\n<node id=\"a\">\n</graph>\n";
  try {
    from_graphml(doc);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
  CHECK_THROWS_AS(from_graphml("<graphml><graph><edge source=\"x\" target=\"y\"/></graph></graphml>"),
                  InputError);
}

TEST_CASE("csv inputs") {
  const auto city = generate_city({});
  const auto sp = scratch("stations.csv");
  const auto rp = scratch("routes.csv");
  write_stations_csv(sp, city.stations);
  write_routes_csv(rp, city.routes);
  CHECK(read_stations_csv(sp) == city.stations);
  const auto routes = read_routes_csv(rp);
  REQUIRE(routes.size() == city.routes.size());
  for (std::size_t i = 0; i < routes.size(); ++i) {
    CHECK(routes[i].route_id == city.routes[i].route_id);
    CHECK(routes[i].stations == city.routes[i].stations);
  }

  {
    std::ofstream f(sp);
    f << "id,mode,lat,lon,in_core\na,METRO,30.5,114.3,true\nb,hovercraft,30.5,114.3,true\n";
  }
  try {
    read_stations_csv(sp);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
  CHECK_THROWS_AS(read_stations_csv(scratch("missing.csv")), InputError);
}

TEST_CASE("synthetic city is deterministic and mode-shaped") {
  const auto a = generate_city({});
  const auto b = generate_city({});
  CHECK(a.stations == b.stations);
  const auto g = build_graph(a.routes, a.stations, true);
  const auto ferry = filter_modes(a.stations, a.routes, {Mode::Ferry});
  const auto fg = build_graph(ferry.second, ferry.first, true);
  CHECK(fg.node_count() == 3);
  // linear artery: two undirected links, stored both ways
  CHECK(fg.edge_count() == 4);
  CHECK(g.mode_count() == 4);
  SyntheticCitySpec no_bus;
  no_bus.n_bus = 0;
  for (const auto& s : generate_city(no_bus).stations) CHECK(s.mode != Mode::Bus);
}
