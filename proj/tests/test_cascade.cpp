#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "mptn/cascade.hpp"
#include "mptn/error.hpp"
#include "mptn/traversal.hpp"
#include "support.hpp"

using namespace mptn;

namespace {

double load_of(const MultilayerGraph& g, const LoadModel& m, const char* a, const char* b) {
  return m.edge_load[*g.find_edge(*g.find(a), *g.find(b))];
}

// All simple paths by DFS; keep the shortest, then the smallest id sequence.
std::vector<NodeIndex> best_path(const MultilayerGraph& g, NodeIndex s, NodeIndex t) {
  std::vector<NodeIndex> best, cur{s};
  std::vector<std::uint8_t> seen(g.node_count(), 0);
  seen[s] = 1;
  auto ids = [&](const std::vector<NodeIndex>& p) {
    std::vector<std::string> out;
    for (auto v : p) out.push_back(g.station(v).id);
    return out;
  };
  auto rec = [&](auto&& self, NodeIndex v) -> void {
    if (v == t) {
      if (best.empty() || cur.size() < best.size() || (cur.size() == best.size() && ids(cur) < ids(best)))
        best = cur;
      return;
    }
    if (!best.empty() && cur.size() >= best.size()) return;
    for (const auto& a : g.out(v)) {
      if (seen[a.node]) continue;
      seen[a.node] = 1;
      cur.push_back(a.node);
      self(self, a.node);
      cur.pop_back();
      seen[a.node] = 0;
    }
  };
  rec(rec, s);
  return best;
}

std::vector<double> exhaustive_oracle(const MultilayerGraph& g) {
  std::vector<double> load(g.edge_count(), 0.0);
  for (NodeIndex s = 0; s < g.node_count(); ++s)
    for (NodeIndex t = 0; t < g.node_count(); ++t) {
      if (s == t) continue;
      const auto p = best_path(g, s, t);
      for (std::size_t i = 1; i < p.size(); ++i) load[*g.find_edge(p[i - 1], p[i])] += 1.0;
    }
  return load;
}

MultilayerGraph diamond() {
  return testing::graph_of({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "d"}, {"a", "c"}, {"c", "d"}});
}

void check_accounting(const CascadeState& s) {
  std::size_t overload = 0;
  std::set<EdgeIndex> seen(s.removed_edges.begin(), s.removed_edges.end());
  for (const auto& r : s.rounds) {
    overload += r.size();
    for (auto e : r) CHECK(seen.insert(e).second);  // rounds are disjoint
  }
  CHECK(s.edges_failed == s.removed_edges.size() + overload);
  const double frac = static_cast<double>(s.edges_failed) / static_cast<double>(s.edges_initial);
  CHECK(std::abs(s.r_recover + frac - 1.0) <= 1e-12);
  CHECK(s.first_wave_fraction >= 0.0);
  CHECK(s.first_wave_fraction <= 1.0);
  CHECK(s.total_damage == s.failed_nodes.size() + s.edges_failed);
}

}  // namespace

TEST_CASE("exhaustive loads on tiny graphs") {
  const auto e = testing::graph_of({"a", "b"}, {{"a", "b"}});
  CHECK(estimate_loads(e, 1, 1, true).edge_load == std::vector<double>{1.0});
  const auto p = testing::graph_of({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  const auto m = estimate_loads(p, 1, 1, true);
  CHECK(load_of(p, m, "a", "b") == 2.0);
  CHECK(load_of(p, m, "b", "c") == 2.0);
  CHECK_THROWS_AS(estimate_loads(testing::graph_of({"a", "b"}, {}), 10, 1, false), InputError);
}

TEST_CASE("exhaustive loads follow the smallest-id shortest path") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto g = random_directed_graph(9, 0.25, seed);
    if (g.edge_count() == 0) continue;
    CHECK(estimate_loads(g, 1, 1, true).edge_load == exhaustive_oracle(g));
  }
}

TEST_CASE("sampled loads are seeded and conserve trips") {
  const auto g = scale_free_graph(60, 2, 4);
  const auto a = estimate_loads(g, 500, 9, false);
  const auto b = estimate_loads(g, 500, 9, false);
  CHECK(a.edge_load == b.edge_load);
  std::size_t trips = 0;
  for (const auto& grp : a.od.groups)
    for (const auto& [src, k] : grp.sources) {
      CHECK(src != grp.target);
      trips += k;
    }
  CHECK(trips == 500);
  for (double l : a.edge_load) CHECK(l >= 0.0);
  CHECK(estimate_loads(g, 500, 10, false).edge_load != a.edge_load);
}

TEST_CASE("diamond cascade") {
  const auto g = diamond();
  const auto m = estimate_loads(g, 1, 1, true);
  // a->d goes through b, the smaller id
  CHECK(load_of(g, m, "a", "b") == 2.0);
  CHECK(load_of(g, m, "b", "d") == 2.0);
  CHECK(load_of(g, m, "a", "c") == 1.0);
  CHECK(load_of(g, m, "c", "d") == 1.0);

  const NodeIndex b = *g.find("b");
  const auto s = run_cascade(g, m, 0.0, std::span(&b, 1));
  REQUIRE(s.rounds.size() == 1);
  std::set<EdgeIndex> round1(s.rounds[0].begin(), s.rounds[0].end());
  CHECK(round1 == std::set<EdgeIndex>{*g.find_edge(*g.find("a"), *g.find("c")),
                                      *g.find_edge(*g.find("c"), *g.find("d"))});
  CHECK(s.removed_edges.size() == 2);
  CHECK(s.edges_failed == 4);
  CHECK(s.r_recover == 0.0);
  CHECK(s.first_wave_fraction == 1.0);
  CHECK(s.total_damage == 5);
  for (std::size_t e = 0; e < g.edge_count(); ++e) CHECK(s.capacities[e] == m.edge_load[e]);
  check_accounting(s);

  // a little slack absorbs the one rerouted trip
  const auto tolerant = run_cascade(g, m, 1.0, std::span(&b, 1));
  CHECK(tolerant.rounds.empty());
  CHECK(tolerant.edges_failed == 2);
}

TEST_CASE("no initial failure is a fixed point") {
  const auto g = diamond();
  const auto s = run_cascade(g, estimate_loads(g, 1, 1, true), 0.0, {});
  CHECK(s.r_recover == 1.0);
  CHECK(s.rounds.empty());
  CHECK(s.total_damage == 0);
}

TEST_CASE("huge tolerance equals plain node deletion") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = scale_free_graph(80, 2, seed);
    const auto m = estimate_loads(g, 1, 1, true);
    for (NodeIndex v : {NodeIndex{0}, NodeIndex{17}, NodeIndex{79}}) {
      const auto s = run_cascade(g, m, 1e6, std::span(&v, 1));
      CHECK(s.rounds.empty());
      // surviving edges are exactly those of the subgraph without v
      std::vector<std::uint8_t> keep(g.node_count(), 1);
      keep[v] = 0;
      std::vector<NodeIndex> original;
      const auto sub = induced_subgraph(g, keep, original);
      std::set<EdgeIndex> failed(s.removed_edges.begin(), s.removed_edges.end());
      std::set<std::pair<NodeIndex, NodeIndex>> survivors, expect;
      for (EdgeIndex e = 0; e < g.edge_count(); ++e)
        if (!failed.count(e)) survivors.emplace(g.edge(e).src, g.edge(e).dst);
      for (const auto& e : sub.edges()) expect.emplace(original[e.src], original[e.dst]);
      CHECK(survivors == expect);
      check_accounting(s);
    }
  }
}

TEST_CASE("recoverability profile") {
  SUBCASE("leaf of a tree with huge tolerance") {
    const auto g = testing::graph_of({"a", "b", "c", "d"},
                                     {{"a", "b"}, {"b", "a"}, {"b", "c"}, {"c", "b"}, {"b", "d"}, {"d", "b"}});
    const auto r = recoverability_profile(g, estimate_loads(g, 1, 1, true), 1e6);
    CHECK(r[*g.find("a")] == doctest::Approx(1.0 - 2.0 / 6.0));
  }
  SUBCASE("hub of a loaded star is the weakest point") {
    const auto g = testing::star();
    const auto r = recoverability_profile(g, estimate_loads(g, 1, 1, true), 0.0);
    const auto hub = *g.find("h");
    for (std::size_t v = 0; v < r.size(); ++v) {
      CHECK(r[v] >= 0.0);
      CHECK(r[v] <= 1.0);
      if (v != hub) CHECK(r[hub] < r[v]);
    }
  }
}

TEST_CASE("cascade accounting on random instances") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = scale_free_graph(100, 2, seed);
    const auto m = estimate_loads(g, 2000, seed, false);
    for (double beta : {0.0, 0.1, 0.5}) {
      const NodeIndex v = throughput_ranking(g, m).front();
      const auto s = run_cascade(g, m, beta, std::span(&v, 1));
      check_accounting(s);
      const auto again = run_cascade(g, m, beta, std::span(&v, 1));
      CHECK(again.rounds == s.rounds);
      CHECK(again.r_recover == s.r_recover);
    }
  }
}

TEST_CASE("beta and shock sweeps") {
  const auto g = scale_free_graph(120, 2, 3);
  const auto m = estimate_loads(g, 1, 1, true);
  const auto top = throughput_ranking(g, m).front();
  const std::vector<double> betas = {0.0, 1e6};
  const auto sweep = beta_sweep(g, m, betas, top);
  CHECK(sweep[0].damage >= sweep[1].damage);
  const std::vector<double> unsorted = {0.5, 0.1};
  CHECK_THROWS_AS(beta_sweep(g, m, unsorted, top), InputError);

  const std::vector<std::size_t> ks = {0, 1, 3, g.node_count()};
  const auto shock = shock_sweep(g, m, 0.2, ks);
  CHECK(shock[0].damage == 0);
  CHECK(shock[3].damage == g.node_count() + g.edge_count());

  // throughput is the incident load, and the ranking sorts it descending
  const auto tp = node_throughput(g, m);
  const auto rank = throughput_ranking(g, m);
  for (std::size_t i = 1; i < rank.size(); ++i) {
    CHECK(tp[rank[i - 1]] >= tp[rank[i]]);
    if (tp[rank[i - 1]] == tp[rank[i]]) CHECK(rank[i - 1] < rank[i]);
  }
}

TEST_CASE("a higher tolerance can raise damage") {
  // Hand-checked. At beta 0.30 removing n2 overloads n1->n4 and n4->n0 at once;
  // n0 is cut off, its demand vanishes, and only n1->n3 fails next (damage 6).
  // At beta 0.35 n4->n0 survives, so n1's trips to n0 and n4 pile onto the
  // n1->n3->n5->n4 chain and three more edges fail (damage 7).
  const auto g = testing::graph_of({"n0", "n1", "n2", "n3", "n4", "n5"},
                                   {{"n1", "n2"}, {"n1", "n3"}, {"n1", "n4"}, {"n2", "n0"},
                                    {"n3", "n5"}, {"n4", "n0"}, {"n4", "n5"}, {"n5", "n4"}});
  const auto m = estimate_loads(g, 1, 1, true);
  CHECK(load_of(g, m, "n4", "n0") == 3.0);
  CHECK(load_of(g, m, "n1", "n4") == 1.0);
  const std::vector<double> betas = {0.30, 0.35};
  const auto sweep = beta_sweep(g, m, betas, *g.find("n2"));
  CHECK(sweep[0].damage == 6);
  CHECK(sweep[1].damage == 7);
}
