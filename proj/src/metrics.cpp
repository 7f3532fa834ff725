#include "mptn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/core.h>

#include "mptn/error.hpp"
#include "mptn/traversal.hpp"

namespace mptn {
namespace {

// Sources are split into a fixed number of contiguous blocks whose partial
// results are reduced in block order, so floating-point sums do not depend on
// the OpenMP thread count.
constexpr std::size_t kMaxBlocks = 64;

struct Block {
  std::size_t begin;
  std::size_t end;
};

std::vector<Block> source_blocks(std::size_t n) {
  const std::size_t count = std::min(n, kMaxBlocks);
  std::vector<Block> blocks;
  blocks.reserve(count);
  for (std::size_t b = 0; b < count; ++b) blocks.push_back({b * n / count, (b + 1) * n / count});
  return blocks;
}

struct SourceSweep {
  double inv_sum = 0.0;
  long long dist_sum = 0;
  long long reached = 0;  // excluding the source itself
  int ecc = 0;
};

SourceSweep sweep_from(const MultilayerGraph& g, NodeIndex s, std::vector<std::int32_t>& dist) {
  SourceSweep out;
  for (auto v : bfs(g, s, dist)) {
    if (v == s) continue;
    const auto d = dist[v];
    out.inv_sum += 1.0 / d;
    out.dist_sum += d;
    out.reached += 1;
    out.ecc = std::max(out.ecc, d);
  }
  return out;
}

std::vector<SourceSweep> all_sweeps(const MultilayerGraph& g) {
  const auto n = g.node_count();
  std::vector<SourceSweep> sweeps(n);
#pragma omp parallel
  {
    std::vector<std::int32_t> dist;
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(n); ++s) {
      sweeps[s] = sweep_from(g, static_cast<NodeIndex>(s), dist);
    }
  }
  return sweeps;
}

PathStats path_stats_from(const std::vector<SourceSweep>& sweeps, std::size_t n) {
  long long reached = 0;
  long long dist_sum = 0;
  int l_max = 0;
  for (const auto& s : sweeps) {
    reached += s.reached;
    dist_sum += s.dist_sum;
    l_max = std::max(l_max, s.ecc);
  }
  if (reached == 0) throw NumericalError("path statistics undefined: no connected node pair");
  const auto pairs = static_cast<long long>(n) * static_cast<long long>(n - 1);
  const long long missing = pairs - reached;
  return {l_max, static_cast<double>(dist_sum + missing * l_max) / static_cast<double>(pairs)};
}

double efficiency_from(const std::vector<SourceSweep>& sweeps, std::size_t n) {
  if (n < 2) return 0.0;
  double total = 0.0;
  for (const auto& s : sweeps) total += s.inv_sum;
  return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

// Single-source dependency accumulation (Brandes) on hop counts.
class BrandesWorkspace {
 public:
  explicit BrandesWorkspace(std::size_t n) : sigma_(n), delta_(n) {}

  void accumulate(const MultilayerGraph& g, NodeIndex s, std::vector<double>& bc) {
    const auto order = bfs(g, s, dist_);
    for (auto v : order) sigma_[v] = 0.0;
    sigma_[s] = 1.0;
    for (auto v : order) {
      for (const auto& arc : g.out(v)) {
        if (dist_[arc.node] == dist_[v] + 1) sigma_[arc.node] += sigma_[v];
      }
    }
    for (auto v : order) delta_[v] = 0.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto w = *it;
      for (const auto& arc : g.in(w)) {
        const auto v = arc.node;
        if (dist_[v] != kUnreached && dist_[v] == dist_[w] - 1) {
          delta_[v] += sigma_[v] / sigma_[w] * (1.0 + delta_[w]);
        }
      }
      if (w != s) bc[w] += delta_[w];
    }
  }

 private:
  std::vector<std::int32_t> dist_;
  std::vector<double> sigma_;
  std::vector<double> delta_;
};

void normalize_betweenness(std::vector<double>& bc) {
  const auto n = bc.size();
  if (n < 3) {
    std::fill(bc.begin(), bc.end(), 0.0);
    return;
  }
  const double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
  for (auto& v : bc) v *= scale;
}

struct GeoSweep {
  double ratio_sum = 0.0;
  long long pairs = 0;
};

GeoSweep geo_sweep_from(const MultilayerGraph& g, NodeIndex s, std::vector<double>& dist) {
  GeoSweep out;
  dijkstra(g, s, dist);
  const auto origin = g.station(s).position();
  for (NodeIndex t = 0; t < g.node_count(); ++t) {
    if (t == s || !std::isfinite(dist[t])) continue;
    const double crow = haversine(origin, g.station(t).position());
    if (crow <= 0.0 || dist[t] <= 0.0) continue;
    out.ratio_sum += crow / dist[t];
    out.pairs += 1;
  }
  return out;
}

}  // namespace

double gini(std::span<const double> values) {
  if (values.empty()) throw InputError("gini of an empty vector");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!(v >= 0.0)) throw InputError(fmt::format("gini requires non-negative values, got {}", v));
  }
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  if (mean <= 0.0) throw NumericalError("gini undefined: mean is zero");
  double num = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    num += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
  }
  return num / (n * n * mean);
}

NodeMetricVector degree_vector(const MultilayerGraph& g) {
  NodeMetricVector out{"degree", std::vector<double>(g.node_count())};
  for (NodeIndex i = 0; i < g.node_count(); ++i) out.values[i] = static_cast<double>(g.degree(i));
  return out;
}

NodeMetricVector out_degree_vector(const MultilayerGraph& g) {
  NodeMetricVector out{"out_degree", std::vector<double>(g.node_count())};
  for (NodeIndex i = 0; i < g.node_count(); ++i) out.values[i] = static_cast<double>(g.out_degree(i));
  return out;
}

NodeMetricVector betweenness(const MultilayerGraph& g) {
  const auto n = g.node_count();
  const auto blocks = source_blocks(n);
  std::vector<std::vector<double>> partial(blocks.size(), std::vector<double>(n, 0.0));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks.size()); ++b) {
    BrandesWorkspace ws(n);
    for (auto s = blocks[b].begin; s < blocks[b].end; ++s) {
      ws.accumulate(g, static_cast<NodeIndex>(s), partial[b]);
    }
  }
  NodeMetricVector out{"betweenness", std::vector<double>(n, 0.0)};
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < n; ++i) out.values[i] += p[i];
  }
  normalize_betweenness(out.values);
  return out;
}

NodeMetricVector betweenness_serial(const MultilayerGraph& g) {
  const auto n = g.node_count();
  NodeMetricVector out{"betweenness", std::vector<double>(n, 0.0)};
  BrandesWorkspace ws(n);
  for (NodeIndex s = 0; s < n; ++s) ws.accumulate(g, s, out.values);
  normalize_betweenness(out.values);
  return out;
}

double global_efficiency(const MultilayerGraph& g) {
  return efficiency_from(all_sweeps(g), g.node_count());
}

double global_efficiency_serial(const MultilayerGraph& g) {
  const auto n = g.node_count();
  if (n < 2) return 0.0;
  std::vector<std::int32_t> dist;
  double total = 0.0;
  for (NodeIndex s = 0; s < n; ++s) {
    bfs(g, s, dist);
    for (NodeIndex t = 0; t < n; ++t) {
      if (t != s && dist[t] > 0) total += 1.0 / dist[t];
    }
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double geospatial_efficiency(const MultilayerGraph& g) {
  const auto n = g.node_count();
  std::vector<GeoSweep> sweeps(n);
#pragma omp parallel
  {
    std::vector<double> dist;
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(n); ++s) {
      sweeps[s] = geo_sweep_from(g, static_cast<NodeIndex>(s), dist);
    }
  }
  double sum = 0.0;
  long long pairs = 0;
  for (const auto& s : sweeps) {
    sum += s.ratio_sum;
    pairs += s.pairs;
  }
  return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

double geospatial_efficiency_serial(const MultilayerGraph& g) {
  std::vector<double> dist;
  double sum = 0.0;
  long long pairs = 0;
  for (NodeIndex s = 0; s < g.node_count(); ++s) {
    const auto sweep = geo_sweep_from(g, s, dist);
    sum += sweep.ratio_sum;
    pairs += sweep.pairs;
  }
  return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

PathStats path_stats(const MultilayerGraph& g) {
  return path_stats_from(all_sweeps(g), g.node_count());
}

PathStats path_stats_serial(const MultilayerGraph& g) {
  std::vector<SourceSweep> sweeps;
  std::vector<std::int32_t> dist;
  for (NodeIndex s = 0; s < g.node_count(); ++s) sweeps.push_back(sweep_from(g, s, dist));
  return path_stats_from(sweeps, g.node_count());
}

double largest_component_fraction(const MultilayerGraph& g) {
  if (g.empty()) return 0.0;
  return static_cast<double>(largest_weak_component(g)) / static_cast<double>(g.node_count());
}

NetworkSummary summarize(const MultilayerGraph& g) {
  NetworkSummary s;
  s.n_nodes = g.node_count();
  s.n_edges = g.edge_count();
  s.n_imt_edges = g.count_edges(EdgeKind::InterModal);
  if (g.empty()) throw InputError("cannot summarize an empty graph");
  s.avg_out_degree = static_cast<double>(s.n_edges) / static_cast<double>(s.n_nodes);
  s.s0 = largest_component_fraction(g);

  const auto sweeps = all_sweeps(g);
  s.efficiency_e = efficiency_from(sweeps, s.n_nodes);
  try {
    const auto ps = path_stats_from(sweeps, s.n_nodes);
    s.diameter_l_max = ps.l_max;
    s.avg_path_len = ps.avg_l;
  } catch (const NumericalError&) {
    s.diameter_l_max = 0;
    s.avg_path_len = std::numeric_limits<double>::quiet_NaN();
  }
  s.efficiency_geo = geospatial_efficiency(g);

  if (s.n_edges > 0) {
    double sum = 0.0;
    for (const auto& e : g.edges()) sum += e.length_m;
    s.avg_edge_len_m = sum / static_cast<double>(s.n_edges);
    double sq = 0.0;
    for (const auto& e : g.edges()) sq += (e.length_m - s.avg_edge_len_m) * (e.length_m - s.avg_edge_len_m);
    s.std_edge_len_m = std::sqrt(sq / static_cast<double>(s.n_edges));
  }

  auto safe_gini = [](const std::vector<double>& v) {
    try {
      return gini(v);
    } catch (const NumericalError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  s.gini_nd = safe_gini(degree_vector(g).values);
  s.gini_bc = safe_gini(betweenness(g).values);
  return s;
}

}  // namespace mptn
