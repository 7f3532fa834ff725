#pragma once

// Independent reference computations shared by the unit tests and the acceptance run.

#include <cmath>

#include "mptn/motifs.hpp"
#include "mptn/theory.hpp"

namespace testing {

// Every ordered triple checked directly.
inline mptn::MotifCensus ffl_brute_force(const mptn::MultilayerGraph& g) {
  using mptn::NodeIndex;
  const auto n = static_cast<NodeIndex>(g.node_count());
  mptn::MotifCensus c;
  c.node_score.assign(n, 0);
  c.edge_score.assign(g.edge_count(), 0);
  for (NodeIndex a = 0; a < n; ++a)
    for (NodeIndex b = 0; b < n; ++b)
      for (NodeIndex d = 0; d < n; ++d) {
        if (a == b || b == d || a == d) continue;
        const auto ab = g.find_edge(a, b), bd = g.find_edge(b, d), ad = g.find_edge(a, d);
        if (!ab || !bd || !ad) continue;
        ++c.ffl_count;
        ++c.node_score[a], ++c.node_score[b], ++c.node_score[d];
        ++c.edge_score[*ab], ++c.edge_score[*bd], ++c.edge_score[*ad];
      }
  return c;
}

// Plain bisection on the marginal condition, no derivatives.
inline double bisection_oracle(const mptn::UtilityParams& p) {
  auto f = [&](double d) {
    return p.b_max * p.alpha * std::exp(-p.alpha * d) - p.beta_risk * p.k * std::pow(d, p.k - 1);
  };
  double lo = 1e-12, hi = 1.0;
  while (f(hi) > 0) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace testing
