// Serial reference vs OpenMP kernel, pairwise on the same inputs.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "mptn/build.hpp"
#include "mptn/cascade.hpp"
#include "mptn/metrics.hpp"
#include "mptn/motifs.hpp"
#include "mptn/nullmodel.hpp"
#include "mptn/resilience.hpp"
#include "mptn/synth.hpp"

using namespace mptn;

namespace {

const MultilayerGraph& scale_free() {
  static const auto g = scale_free_graph(1500, 3, 7);
  return g;
}

const MultilayerGraph& city() {
  static const auto g = [] {
    SyntheticCitySpec spec;
    spec.n_bus = 900;
    spec.n_metro = 40;
    spec.area_km = 15;
    const auto c = generate_city(spec);
    return add_transfer_edges(build_graph(c.routes, c.stations, true), 150.0).graph;
  }();
  return g;
}

const LoadModel& city_loads() {
  static const auto m = estimate_loads(city(), kDefaultOdSamples, kDefaultOdSeed, false);
  return m;
}

template <auto Fn>
void run_metric(benchmark::State& state, const MultilayerGraph& g) {
  for (auto _ : state) benchmark::DoNotOptimize(Fn(g));
}

void BM_BetweennessSerial(benchmark::State& s) { run_metric<betweenness_serial>(s, scale_free()); }
void BM_Betweenness(benchmark::State& s) { run_metric<betweenness>(s, scale_free()); }
void BM_EfficiencySerial(benchmark::State& s) { run_metric<global_efficiency_serial>(s, scale_free()); }
void BM_Efficiency(benchmark::State& s) { run_metric<global_efficiency>(s, scale_free()); }
void BM_GeoEfficiencySerial(benchmark::State& s) { run_metric<geospatial_efficiency_serial>(s, city()); }
void BM_GeoEfficiency(benchmark::State& s) { run_metric<geospatial_efficiency>(s, city()); }
void BM_FflSerial(benchmark::State& s) { run_metric<enumerate_ffl_serial>(s, scale_free()); }
void BM_Ffl(benchmark::State& s) { run_metric<enumerate_ffl>(s, scale_free()); }

void BM_RandomCurveSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(degradation_curve_serial(scale_free(), AttackStrategy::random(1), 50));
}
void BM_RandomCurve(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(degradation_curve(scale_free(), AttackStrategy::random(1), 50));
}

void BM_RelocationSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(relocation_rate_serial(city(), 750.0, RelocationModel::Symmetric));
}
void BM_Relocation(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(relocation_rate(city(), 750.0, RelocationModel::Symmetric));
}

void BM_RouteLoadsSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(route_loads_serial(city(), city_loads().od));
}
void BM_RouteLoads(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(route_loads(city(), city_loads().od));
}

void BM_CascadeSerial(benchmark::State& s) {
  const NodeIndex hub = throughput_ranking(city(), city_loads()).front();
  for (auto _ : s) benchmark::DoNotOptimize(run_cascade_serial(city(), city_loads(), 0.2, std::span(&hub, 1)));
}
void BM_Cascade(benchmark::State& s) {
  const NodeIndex hub = throughput_ranking(city(), city_loads()).front();
  for (auto _ : s) benchmark::DoNotOptimize(run_cascade(city(), city_loads(), 0.2, std::span(&hub, 1)));
}

void BM_EnsembleEfficiency(benchmark::State& s) {
  const auto g = scale_free_graph(300, 2, 3);
  const GraphMetric eff = [](const MultilayerGraph& h) { return global_efficiency_serial(h); };
  for (auto _ : s) benchmark::DoNotOptimize(build_ensemble(g, eff, "efficiency", 50, 42));
}

}  // namespace

BENCHMARK(BM_BetweennessSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Betweenness)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EfficiencySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Efficiency)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GeoEfficiencySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GeoEfficiency)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FflSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Ffl)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomCurveSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomCurve)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RelocationSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Relocation)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RouteLoadsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RouteLoads)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CascadeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Cascade)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleEfficiency)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
