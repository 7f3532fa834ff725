#include "mptn/resilience.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mptn/error.hpp"
#include "mptn/metrics.hpp"
#include "mptn/motifs.hpp"
#include "mptn/rng.hpp"
#include "mptn/traversal.hpp"

namespace mptn {
namespace {

std::vector<double> metric_for(const MultilayerGraph& g, AttackKind kind) {
  switch (kind) {
    case AttackKind::DegreeTargeted:
      return degree_vector(g).values;
    case AttackKind::BetweennessTargeted:
      return betweenness(g).values;
    case AttackKind::MotifImportance: {
      const auto census = enumerate_ffl(g);
      return {census.node_score.begin(), census.node_score.end()};
    }
    case AttackKind::Random:
      break;
  }
  throw InputError("random attacks have no ranking metric");
}

std::vector<NodeIndex> rank_descending(const std::vector<double>& metric) {
  std::vector<NodeIndex> order(metric.size());
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeIndex a, NodeIndex b) { return metric[a] > metric[b]; });
  return order;
}

std::vector<NodeIndex> adaptive_order(const MultilayerGraph& g, AttackKind kind) {
  const auto n = g.node_count();
  std::vector<std::uint8_t> alive(n, 1);
  std::vector<NodeIndex> order;
  order.reserve(n);
  std::vector<NodeIndex> original;
  while (order.size() < n) {
    const auto sub = induced_subgraph(g, alive, original);
    const auto metric = metric_for(sub, kind);
    // original[] is ascending, so the first maximum has the smallest id.
    const auto best = static_cast<std::size_t>(
        std::max_element(metric.begin(), metric.end(),
                         [](double a, double b) { return a < b; }) -
        metric.begin());
    const auto victim = original[best];
    order.push_back(victim);
    alive[victim] = 0;
  }
  return order;
}

std::vector<NodeIndex> random_order(std::size_t n, std::uint64_t seed) {
  std::vector<NodeIndex> order(n);
  std::iota(order.begin(), order.end(), NodeIndex{0});
  Rng rng(seed);
  rng.shuffle(std::span<NodeIndex>(order));
  return order;
}

DegradationCurve curve_from(const std::vector<double>& s) {
  DegradationCurve curve;
  const auto n = s.size() - 1;
  curve.points.reserve(s.size());
  double area = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    curve.points.push_back({n == 0 ? 0.0 : static_cast<double>(i) / static_cast<double>(n), s[i]});
    if (i > 0) area += s[i];
  }
  curve.r_b = n == 0 ? 0.0 : area / static_cast<double>(n);
  return curve;
}

std::vector<double> mean_of(const std::vector<std::vector<double>>& runs) {
  std::vector<double> mean(runs.front().size(), 0.0);
  for (const auto& r : runs) {
    for (std::size_t i = 0; i < r.size(); ++i) mean[i] += r[i];
  }
  for (auto& v : mean) v /= static_cast<double>(runs.size());
  return mean;
}

// Neighbours of v in either direction, each listed once, ascending.
std::vector<NodeIndex> undirected_neighbours(const MultilayerGraph& g, NodeIndex v) {
  std::vector<NodeIndex> out;
  for (const auto& a : g.out(v)) out.push_back(a.node);
  for (const auto& a : g.in(v)) out.push_back(a.node);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

class RelocationWorkspace {
 public:
  explicit RelocationWorkspace(std::size_t n) : alive_(n, 1), transfer_(n) {}

  std::optional<double> node_rate(const MultilayerGraph& g, NodeIndex v, double d_max,
                                  RelocationModel model) {
    const auto desc = bfs(g, v, dist_);
    if (desc.size() <= 1) return std::nullopt;  // only v itself

    struct Candidate {
      double distance;
      NodeIndex node;
    };
    std::vector<Candidate> candidates;
    const auto origin = g.station(v).position();
    for (auto u : undirected_neighbours(g, v)) {
      if (model == RelocationModel::Asymmetric && g.station(u).mode == g.station(v).mode) continue;
      const double d = haversine(origin, g.station(u).position());
      if (d <= d_max) candidates.push_back({d, u});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      return a.distance != b.distance ? a.distance < b.distance : a.node < b.node;
    });

    for (auto n : desc) transfer_[n] = std::numeric_limits<double>::infinity();
    std::size_t remaining = desc.size() - 1;
    alive_[v] = 0;
    for (const auto& c : candidates) {
      if (remaining == 0) break;
      for (auto n : bfs(g, c.node, reach_, Survivors{alive_, {}})) {
        if (n == v || dist_[n] == kUnreached || std::isfinite(transfer_[n])) continue;
        transfer_[n] = c.distance;
        --remaining;
      }
    }
    alive_[v] = 1;

    double sum = 0.0;
    for (auto n : desc) {
      if (n == v || !std::isfinite(transfer_[n])) continue;
      sum += 1.0 - transfer_[n] / d_max;
    }
    return sum / static_cast<double>(desc.size() - 1);
  }

 private:
  std::vector<std::uint8_t> alive_;
  std::vector<double> transfer_;
  std::vector<std::int32_t> dist_;
  std::vector<std::int32_t> reach_;
};

std::vector<NodeIndex> evaluation_set(const MultilayerGraph& g, std::span<const NodeIndex> sample) {
  if (!sample.empty()) {
    std::vector<NodeIndex> nodes(sample.begin(), sample.end());
    for (auto v : nodes) {
      if (v >= g.node_count()) throw InputError("relocation sample node out of range");
    }
    return nodes;
  }
  std::vector<NodeIndex> nodes(g.node_count());
  std::iota(nodes.begin(), nodes.end(), NodeIndex{0});
  return nodes;
}

RelocationResult relocation_setup(const MultilayerGraph& g, double d_max, RelocationModel model) {
  if (!(d_max > 0.0)) throw InputError("d_max must be positive");
  RelocationResult result;
  result.per_node.assign(g.node_count(), std::nullopt);
  result.d_max = d_max;
  result.model = model;
  result.applicable = !(model == RelocationModel::Asymmetric && g.mode_count() < 2);
  result.network_rl = std::numeric_limits<double>::quiet_NaN();
  return result;
}

void finish_relocation(RelocationResult& result) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& v : result.per_node) {
    if (!v) continue;
    sum += *v;
    ++count;
  }
  result.network_rl = count == 0 ? std::numeric_limits<double>::quiet_NaN()
                                 : sum / static_cast<double>(count);
}

}  // namespace

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::Random:
      return "random";
    case AttackKind::DegreeTargeted:
      return "degree";
    case AttackKind::BetweennessTargeted:
      return "betweenness";
    case AttackKind::MotifImportance:
      return "motif";
  }
  return "unknown";
}

std::optional<AttackKind> parse_attack_kind(std::string_view text) {
  if (text == "random") return AttackKind::Random;
  if (text == "degree") return AttackKind::DegreeTargeted;
  if (text == "betweenness") return AttackKind::BetweennessTargeted;
  if (text == "motif") return AttackKind::MotifImportance;
  return std::nullopt;
}

std::string_view to_string(RelocationModel model) {
  return model == RelocationModel::Symmetric ? "symmetric" : "asymmetric";
}

std::optional<RelocationModel> parse_relocation_model(std::string_view text) {
  if (text == "symmetric") return RelocationModel::Symmetric;
  if (text == "asymmetric") return RelocationModel::Asymmetric;
  return std::nullopt;
}

std::vector<NodeIndex> attack_order(const MultilayerGraph& g, const AttackStrategy& strategy) {
  if (strategy.kind == AttackKind::Random) return random_order(g.node_count(), strategy.seed);
  if (strategy.adaptive) return adaptive_order(g, strategy.kind);
  return rank_descending(metric_for(g, strategy.kind));
}

std::vector<double> lcc_trajectory(const MultilayerGraph& g, std::span<const NodeIndex> order) {
  const auto n = g.node_count();
  if (order.size() != n) throw InputError("attack order must list every node once");
  const double scale = n == 0 ? 1.0 : 1.0 / static_cast<double>(n);
  std::vector<double> s(n + 1, 0.0);
  std::vector<std::uint8_t> present(n, 0);
  DisjointSets sets(n);
  std::size_t best = 0;
  // Re-insert nodes in reverse removal order; after inserting order[i] the
  // present set is exactly the survivors of the first i removals.
  for (std::size_t i = n; i-- > 0;) {
    const auto v = order[i];
    present[v] = 1;
    best = std::max<std::size_t>(best, 1);
    for (const auto& a : g.out(v)) {
      if (present[a.node]) best = std::max(best, sets.unite(v, a.node));
    }
    for (const auto& a : g.in(v)) {
      if (present[a.node]) best = std::max(best, sets.unite(v, a.node));
    }
    s[i] = static_cast<double>(best) * scale;
  }
  return s;
}

std::vector<double> lcc_trajectory_serial(const MultilayerGraph& g, std::span<const NodeIndex> order) {
  const auto n = g.node_count();
  const double scale = n == 0 ? 1.0 : 1.0 / static_cast<double>(n);
  std::vector<std::uint8_t> alive(n, 1);
  std::vector<double> s;
  s.push_back(n == 0 ? 0.0 : static_cast<double>(largest_weak_component(g)) * scale);
  for (auto v : order) {
    alive[v] = 0;
    s.push_back(static_cast<double>(largest_weak_component(g, {alive, {}})) * scale);
  }
  return s;
}

DegradationCurve degradation_curve(const MultilayerGraph& g, const AttackStrategy& strategy,
                                   std::size_t repeats) {
  if (repeats == 0) throw InputError("repeats must be at least 1");
  if (strategy.kind != AttackKind::Random) {
    return curve_from(lcc_trajectory(g, attack_order(g, strategy)));
  }
  std::vector<std::vector<double>> runs(repeats);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(repeats); ++r) {
    const auto order = random_order(g.node_count(), derive_seed(strategy.seed, static_cast<std::uint64_t>(r)));
    runs[r] = lcc_trajectory(g, order);
  }
  return curve_from(mean_of(runs));
}

DegradationCurve degradation_curve_serial(const MultilayerGraph& g, const AttackStrategy& strategy,
                                          std::size_t repeats) {
  if (repeats == 0) throw InputError("repeats must be at least 1");
  if (strategy.kind != AttackKind::Random) {
    return curve_from(lcc_trajectory_serial(g, attack_order(g, strategy)));
  }
  std::vector<std::vector<double>> runs;
  for (std::size_t r = 0; r < repeats; ++r) {
    const auto order = random_order(g.node_count(), derive_seed(strategy.seed, r));
    runs.push_back(lcc_trajectory_serial(g, order));
  }
  return curve_from(mean_of(runs));
}

RelocationResult relocation_rate(const MultilayerGraph& g, double d_max, RelocationModel model,
                                 std::span<const NodeIndex> sample) {
  auto result = relocation_setup(g, d_max, model);
  if (!result.applicable) return result;
  const auto nodes = evaluation_set(g, sample);
#pragma omp parallel
  {
    RelocationWorkspace ws(g.node_count());
#pragma omp for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(nodes.size()); ++i) {
      result.per_node[nodes[i]] = ws.node_rate(g, nodes[i], d_max, model);
    }
  }
  finish_relocation(result);
  return result;
}

RelocationResult relocation_rate_serial(const MultilayerGraph& g, double d_max,
                                        RelocationModel model, std::span<const NodeIndex> sample) {
  auto result = relocation_setup(g, d_max, model);
  if (!result.applicable) return result;
  RelocationWorkspace ws(g.node_count());
  for (auto v : evaluation_set(g, sample)) result.per_node[v] = ws.node_rate(g, v, d_max, model);
  finish_relocation(result);
  return result;
}

}  // namespace mptn
