#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mptn/error.hpp"
#include "mptn/metrics.hpp"
#include "mptn/nullmodel.hpp"
#include "support.hpp"

using namespace mptn;

namespace {

double textbook_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::multiset<std::pair<std::size_t, std::size_t>> degree_profile(const MultilayerGraph& g) {
  std::multiset<std::pair<std::size_t, std::size_t>> out;
  for (NodeIndex v = 0; v < g.node_count(); ++v) out.emplace(g.in_degree(v), g.out_degree(v));
  return out;
}

MultilayerGraph complete(std::size_t n) {
  auto base = random_directed_graph(n, 0.0, 1);
  std::vector<Edge> edges;
  for (NodeIndex a = 0; a < n; ++a)
    for (NodeIndex b = 0; b < n; ++b)
      if (a != b) edges.push_back({a, b, EdgeKind::IntraModal, 1.0});
  return MultilayerGraph::from_indexed(base.stations(), edges);
}

}  // namespace

TEST_CASE("replicas keep nodes and edge count") {
  const auto g = random_directed_graph(40, 0.1, 8, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = random_replica(g, seed);
    CHECK(r.stations() == g.stations());
    CHECK(r.edge_count() == g.edge_count());
    for (const auto& e : r.edges()) {
      CHECK(e.src != e.dst);
      const auto& a = r.station(e.src);
      const auto& b = r.station(e.dst);
      CHECK(e.length_m == haversine(a.position(), b.position()));
      CHECK((e.kind == EdgeKind::InterModal) == (a.mode != b.mode));
    }
  }
  CHECK(random_replica(g, 1).edges() != random_replica(g, 2).edges());
  CHECK(random_replica(g, 5) == random_replica(g, 5));
  CHECK(degree_profile(random_replica(g, 3)) != degree_profile(g));
}

TEST_CASE("dense replicas") {
  const auto k = complete(8);
  const auto r = random_replica(k, 4);
  CHECK(r.edge_count() == k.edge_count());
  for (std::size_t e = 0; e < k.edge_count(); ++e) {
    CHECK(r.edge(e).src == k.edge(e).src);
    CHECK(r.edge(e).dst == k.edge(e).dst);
  }
  // nearly complete: the complement path must still hit the exact count
  const auto near = random_directed_graph(12, 0.9, 2);
  CHECK(random_replica(near, 3).edge_count() == near.edge_count());
}

TEST_CASE("z scores") {
  const auto e = ensemble_from_values("m", {1.0, 2.0, 3.0});
  CHECK(e.mu_rand == 2.0);
  CHECK(e.sigma_rand == 1.0);
  CHECK(z_score(4.0, e) == 2.0);
  CHECK(z_score(e.mu_rand, e) == 0.0);
  CHECK(z_score(e.mu_rand + 2 * e.sigma_rand, e) == doctest::Approx(2.0));
  CHECK_THROWS_AS(z_score(1.0, ensemble_from_values("m", {5.0, 5.0, 5.0})), NumericalError);
  CHECK_THROWS_AS(ensemble_from_values("m", {1.0}), InputError);

  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(10), shifted(10);
    const double c = rng.uniform(-100, 100);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.uniform(0, 1), shifted[i] = v[i] + c;
    const double x = rng.uniform(-1, 2);
    CHECK(z_score(x + c, ensemble_from_values("m", shifted)) ==
          doctest::Approx(z_score(x, ensemble_from_values("m", v))).epsilon(1e-6));
  }
}

TEST_CASE("pearson") {
  const std::vector<double> v{1, 4, 2, 8, 5}, neg{-1, -4, -2, -8, -5};
  CHECK(pearson(v, v) == doctest::Approx(1.0));
  CHECK(pearson(v, neg) == doctest::Approx(-1.0));
  const std::vector<double> a{1, -1, 1, -1}, b{1, 1, -1, -1};
  CHECK(pearson(a, b) == 0.0);
  const std::vector<double> flat{2, 2, 2, 2, 2}, shorter{1, 2};
  CHECK_THROWS_AS(pearson(v, flat), NumericalError);
  CHECK_THROWS_AS(pearson(shorter, shorter), InputError);
  CHECK_THROWS_AS(pearson(v, a), InputError);

  Rng rng(6);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> x(3 + rng.below(50)), y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(-5, 5), y[i] = x[i] * 0.3 + rng.uniform(-5, 5);
    CHECK(std::abs(pearson(x, y) - textbook_pearson(x, y)) <= 1e-12);
  }
}

TEST_CASE("ensemble statistics settle with more replicas") {
  const auto g = random_directed_graph(40, 0.08, 12);
  const GraphMetric eff = [](const MultilayerGraph& h) { return global_efficiency(h); };
  const auto e50 = build_ensemble(g, eff, "efficiency", 50, 7);
  const auto e100 = build_ensemble(g, eff, "efficiency", 100, 7);
  CHECK(e50.replicas == 50);
  CHECK(e50.values.size() == 50);
  CHECK(std::abs(e50.mu_rand - e100.mu_rand) < 3 * e50.sigma_rand / std::sqrt(50.0));
  CHECK(e50.sigma_rand > 0.0);
}

TEST_CASE("static vs dynamic matrix") {
  Rng rng(9);
  std::vector<double> rec(30);
  std::vector<NodeMetricVector> metrics{{"degree", std::vector<double>(30)}, {"betweenness", std::vector<double>(30)}};
  for (std::size_t i = 0; i < 30; ++i) {
    rec[i] = rng.uniform();
    metrics[0].values[i] = rng.uniform();
    metrics[1].values[i] = rng.uniform() + metrics[0].values[i];
  }
  const auto m = static_vs_dynamic_report(rec, metrics);
  CHECK(m.names == std::vector<std::string>{"degree", "betweenness", "recoverability"});
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(m.r[i][i] == 1.0);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(std::abs(m.r[i][j] - m.r[j][i]) <= 1e-12);
      CHECK(std::abs(m.r[i][j]) <= 1.0);
    }
  }
  metrics[0].values.pop_back();
  CHECK_THROWS_AS(static_vs_dynamic_report(rec, metrics), InputError);
}
