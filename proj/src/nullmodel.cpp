#include "mptn/nullmodel.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <fmt/core.h>

#include "mptn/error.hpp"
#include "mptn/rng.hpp"

namespace mptn {
namespace {

// Ordered non-loop pair number k in [0, n(n-1)).
Edge pair_edge(const MultilayerGraph& g, std::uint64_t k) {
  const auto n = g.node_count();
  const auto src = static_cast<NodeIndex>(k / (n - 1));
  auto dst = static_cast<NodeIndex>(k % (n - 1));
  if (dst >= src) ++dst;
  const auto& a = g.station(src);
  const auto& b = g.station(dst);
  return {src, dst, a.mode == b.mode ? EdgeKind::IntraModal : EdgeKind::InterModal,
          haversine(a.position(), b.position())};
}

}  // namespace

MultilayerGraph random_replica(const MultilayerGraph& g, std::uint64_t seed) {
  const auto n = static_cast<std::uint64_t>(g.node_count());
  const std::uint64_t pairs = n < 2 ? 0 : n * (n - 1);
  const std::uint64_t m = g.edge_count();
  if (m > pairs) throw InputError("more edges than ordered node pairs");

  Rng rng(seed);
  // Draw the smaller of the edge set and its complement.
  const bool draw_complement = m > pairs / 2;
  const std::uint64_t draws = draw_complement ? pairs - m : m;
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(draws * 2);
  std::vector<std::uint64_t> picked;
  picked.reserve(draws);
  while (picked.size() < draws) {
    const auto k = rng.below(pairs);
    if (chosen.insert(k).second) picked.push_back(k);
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  if (draw_complement) {
    for (std::uint64_t k = 0; k < pairs; ++k) {
      if (!chosen.count(k)) edges.push_back(pair_edge(g, k));
    }
  } else {
    std::sort(picked.begin(), picked.end());
    for (auto k : picked) edges.push_back(pair_edge(g, k));
  }
  return MultilayerGraph::from_indexed(g.stations(), std::move(edges), g.d_imt());
}

NullModelEnsemble ensemble_from_values(std::string metric_name, std::vector<double> values,
                                       std::uint64_t seed) {
  if (values.size() < 2) throw InputError("an ensemble needs at least two replicas");
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double sq = 0.0;
  double comp = 0.0;
  for (double v : values) {
    sq += (v - mean) * (v - mean);
    comp += v - mean;
  }
  // Corrected two-pass variance.
  const double var = std::max(0.0, (sq - comp * comp / n) / (n - 1.0));
  NullModelEnsemble e;
  e.metric_name = std::move(metric_name);
  e.mu_rand = mean;
  e.sigma_rand = std::sqrt(var);
  e.replicas = values.size();
  e.seed = seed;
  e.values = std::move(values);
  return e;
}

NullModelEnsemble build_ensemble(const MultilayerGraph& g, const GraphMetric& metric,
                                 std::string metric_name, std::size_t replicas, std::uint64_t seed) {
  if (replicas < 2) throw InputError("an ensemble needs at least two replicas");
  std::vector<double> values(replicas);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(replicas); ++r) {
    values[r] = metric(random_replica(g, derive_seed(seed, static_cast<std::uint64_t>(r))));
  }
  return ensemble_from_values(std::move(metric_name), std::move(values), seed);
}

double z_score(double x_real, const NullModelEnsemble& ensemble) {
  if (!(ensemble.sigma_rand > 0.0)) {
    throw NumericalError(fmt::format("degenerate ensemble for '{}': sigma is zero", ensemble.metric_name));
  }
  return (x_real - ensemble.mu_rand) / ensemble.sigma_rand;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InputError("pearson inputs differ in length");
  if (xs.size() < 3) throw InputError("pearson needs at least three points");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw NumericalError("pearson undefined for a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix static_vs_dynamic_report(std::span<const double> recoverability,
                                           const std::vector<NodeMetricVector>& metrics) {
  CorrelationMatrix out;
  std::vector<std::span<const double>> columns;
  for (const auto& m : metrics) {
    if (m.values.size() != recoverability.size()) {
      throw InputError(fmt::format("metric '{}' does not cover every node", m.metric_name));
    }
    out.names.push_back(m.metric_name);
    columns.emplace_back(m.values);
  }
  out.names.push_back("recoverability");
  columns.push_back(recoverability);
  const auto k = columns.size();
  out.r.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      out.r[i][j] = out.r[j][i] = pearson(columns[i], columns[j]);
    }
  }
  return out;
}

}  // namespace mptn
