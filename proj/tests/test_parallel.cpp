#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// Each OpenMP kernel against its serial reference, at several thread counts.
// Parallel results must be bit-identical across thread counts because the
// reductions run in a fixed block order. The serial references sum in plain
// source order, so floating-point metrics only agree with them to rounding.

#include <omp.h>

#include "mptn/build.hpp"
#include "mptn/cascade.hpp"
#include "mptn/metrics.hpp"
#include "mptn/motifs.hpp"
#include "mptn/nullmodel.hpp"
#include "mptn/resilience.hpp"
#include "support.hpp"

using namespace mptn;

namespace {

const int kThreadCounts[] = {1, 2, 3, 4, 7};

struct ThreadGuard {
  int saved = omp_get_max_threads();
  ~ThreadGuard() { omp_set_num_threads(saved); }
};

std::vector<MultilayerGraph> corpus() {
  std::vector<MultilayerGraph> out;
  out.push_back(testing::star());
  out.push_back(random_directed_graph(60, 0.05, 1, 3, 2.0));
  out.push_back(random_directed_graph(90, 0.03, 2, 4, 3.0));
  out.push_back(scale_free_graph(150, 2, 3));
  const auto city = generate_city({});
  out.push_back(add_transfer_edges(build_graph(city.routes, city.stations, true), 100.0).graph);
  return out;
}

}  // namespace

TEST_CASE("metrics kernels") {
  ThreadGuard guard;
  for (const auto& g : corpus()) {
    const auto bc = betweenness_serial(g).values;
    const double e = global_efficiency_serial(g);
    const double eg = geospatial_efficiency_serial(g);
    const auto ps = path_stats_serial(g);
    omp_set_num_threads(1);
    const auto bc1 = betweenness(g).values;
    const double e1 = global_efficiency(g);
    const double eg1 = geospatial_efficiency(g);
    REQUIRE(bc1.size() == bc.size());
    for (std::size_t i = 0; i < bc.size(); ++i) CHECK(bc1[i] == doctest::Approx(bc[i]).epsilon(1e-12));
    CHECK(e1 == doctest::Approx(e).epsilon(1e-12));
    CHECK(eg1 == doctest::Approx(eg).epsilon(1e-12));
    for (int t : kThreadCounts) {
      omp_set_num_threads(t);
      CHECK(betweenness(g).values == bc1);
      CHECK(global_efficiency(g) == e1);
      CHECK(geospatial_efficiency(g) == eg1);
      const auto p = path_stats(g);
      CHECK(p.l_max == ps.l_max);
      CHECK(p.avg_l == ps.avg_l);
    }
  }
}

TEST_CASE("resilience kernels") {
  ThreadGuard guard;
  for (const auto& g : corpus()) {
    const auto order = attack_order(g, AttackStrategy::random(5));
    const auto traj = lcc_trajectory_serial(g, order);
    const auto rnd = degradation_curve_serial(g, AttackStrategy::random(5), 8);
    const auto deg = degradation_curve_serial(g, AttackStrategy::targeted(AttackKind::DegreeTargeted, true));
    const auto sym = relocation_rate_serial(g, 750.0, RelocationModel::Symmetric);
    const auto asym = relocation_rate_serial(g, 1600.0, RelocationModel::Asymmetric);
    for (int t : kThreadCounts) {
      omp_set_num_threads(t);
      CHECK(lcc_trajectory(g, order) == traj);
      const auto r = degradation_curve(g, AttackStrategy::random(5), 8);
      CHECK(r.r_b == rnd.r_b);
      const auto d = degradation_curve(g, AttackStrategy::targeted(AttackKind::DegreeTargeted, true));
      CHECK(d.r_b == deg.r_b);
      const auto s = relocation_rate(g, 750.0, RelocationModel::Symmetric);
      CHECK(s.per_node == sym.per_node);
      CHECK(s.network_rl == sym.network_rl);
      CHECK(relocation_rate(g, 1600.0, RelocationModel::Asymmetric).per_node == asym.per_node);
    }
  }
}

TEST_CASE("motif kernel") {
  ThreadGuard guard;
  for (const auto& g : corpus()) {
    const auto ref = enumerate_ffl_serial(g);
    for (int t : kThreadCounts) {
      omp_set_num_threads(t);
      CHECK(enumerate_ffl(g) == ref);
    }
  }
}

TEST_CASE("cascade kernels") {
  ThreadGuard guard;
  auto graphs = corpus();
  graphs.resize(4);  // the city profile is slow with the serial path tracer
  for (const auto& g : graphs) {
    for (bool exhaustive : {true, false}) {
      const auto m = estimate_loads(g, 3000, 11, exhaustive);
      const auto loads = route_loads_serial(g, m.od);
      CHECK(loads == m.edge_load);
      const NodeIndex v = throughput_ranking(g, m).front();
      const auto ref = run_cascade_serial(g, m, 0.1, std::span(&v, 1));
      const auto prof = recoverability_profile_serial(g, m, 0.2);
      for (int t : kThreadCounts) {
        omp_set_num_threads(t);
        CHECK(route_loads(g, m.od) == loads);
        const auto s = run_cascade(g, m, 0.1, std::span(&v, 1));
        CHECK(s.rounds == ref.rounds);
        CHECK(s.r_recover == ref.r_recover);
        CHECK(s.total_damage == ref.total_damage);
        CHECK(recoverability_profile(g, m, 0.2) == prof);
        CHECK(estimate_loads(g, 3000, 11, exhaustive).edge_load == m.edge_load);
      }
    }
  }
}

TEST_CASE("null model ensemble") {
  ThreadGuard guard;
  const auto g = random_directed_graph(40, 0.08, 12);
  const GraphMetric eff = [](const MultilayerGraph& h) { return global_efficiency_serial(h); };
  omp_set_num_threads(1);
  const auto ref = build_ensemble(g, eff, "efficiency", 30, 3);
  for (int t : kThreadCounts) {
    omp_set_num_threads(t);
    const auto e = build_ensemble(g, eff, "efficiency", 30, 3);
    CHECK(e.values == ref.values);
    CHECK(e.mu_rand == ref.mu_rand);
    CHECK(e.sigma_rand == ref.sigma_rand);
  }
}
