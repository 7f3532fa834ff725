#include "mptn/motifs.hpp"

#include <algorithm>
#include <numeric>

#include "mptn/error.hpp"

namespace mptn {
namespace {

constexpr std::size_t kMaxBlocks = 64;

// Tallies the FFLs closed by edge `ac`. Both adjacency lists are sorted by
// neighbour, so the intersection is a linear merge.
void close_edge(const MultilayerGraph& g, EdgeIndex ac, MotifCensus& tally) {
  const auto& e = g.edge(ac);
  const auto a = e.src;
  const auto c = e.dst;
  auto outs = g.out(a);
  auto ins = g.in(c);
  auto i = outs.begin();
  auto j = ins.begin();
  while (i != outs.end() && j != ins.end()) {
    if (i->node < j->node) {
      ++i;
    } else if (j->node < i->node) {
      ++j;
    } else {
      const auto b = i->node;
      if (b != a && b != c) {
        tally.ffl_count += 1;
        tally.node_score[a] += 1;
        tally.node_score[b] += 1;
        tally.node_score[c] += 1;
        tally.edge_score[ac] += 1;
        tally.edge_score[i->edge] += 1;
        tally.edge_score[j->edge] += 1;
      }
      ++i;
      ++j;
    }
  }
}

MotifCensus empty_census(const MultilayerGraph& g) {
  return {0, std::vector<std::uint64_t>(g.node_count(), 0),
          std::vector<std::uint64_t>(g.edge_count(), 0)};
}

}  // namespace

MotifCensus enumerate_ffl(const MultilayerGraph& g) {
  const auto m = g.edge_count();
  const std::size_t blocks = std::max<std::size_t>(1, std::min(m, kMaxBlocks));
  std::vector<MotifCensus> partial(blocks, empty_census(g));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const auto begin = static_cast<std::size_t>(b) * m / blocks;
    const auto end = static_cast<std::size_t>(b + 1) * m / blocks;
    for (auto k = begin; k < end; ++k) close_edge(g, static_cast<EdgeIndex>(k), partial[b]);
  }
  auto total = empty_census(g);
  for (const auto& p : partial) {
    total.ffl_count += p.ffl_count;
    for (std::size_t i = 0; i < p.node_score.size(); ++i) total.node_score[i] += p.node_score[i];
    for (std::size_t k = 0; k < p.edge_score.size(); ++k) total.edge_score[k] += p.edge_score[k];
  }
  return total;
}

MotifCensus enumerate_ffl_serial(const MultilayerGraph& g) {
  auto tally = empty_census(g);
  for (EdgeIndex k = 0; k < g.edge_count(); ++k) close_edge(g, k, tally);
  return tally;
}

std::vector<NodeIndex> motif_attack_order(const MotifCensus& census) {
  std::vector<NodeIndex> order(census.node_score.size());
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex x, NodeIndex y) {
    return census.node_score[x] > census.node_score[y];
  });
  return order;
}

std::vector<NodeIndex> motif_attack_order(const MultilayerGraph& g) {
  return motif_attack_order(enumerate_ffl(g));
}

std::vector<RankedEdge> structural_hierarchy(const MultilayerGraph& g, std::size_t top_k) {
  if (top_k == 0) throw InputError("top_k must be at least 1");
  const auto census = enumerate_ffl(g);
  std::vector<RankedEdge> ranked;
  for (EdgeIndex k = 0; k < g.edge_count(); ++k) {
    if (census.edge_score[k] > 0) ranked.push_back({k, census.edge_score[k]});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedEdge& x, const RankedEdge& y) { return x.score > y.score; });
  if (ranked.size() > top_k) ranked.resize(top_k);
  return ranked;
}

}  // namespace mptn
