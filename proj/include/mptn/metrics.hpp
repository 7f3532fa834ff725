#pragma once

#include <span>
#include <string>
#include <vector>

#include "mptn/graph.hpp"

namespace mptn {

/// One value per node, indexed like the graph's station table.
struct NodeMetricVector {
  std::string metric_name;
  std::vector<double> values;
};

/// Gini coefficient of a non-negative vector (sorted internally).
/// Throws InputError when empty or negative, NumericalError when the mean is 0.
double gini(std::span<const double> values);

NodeMetricVector degree_vector(const MultilayerGraph& g);
NodeMetricVector out_degree_vector(const MultilayerGraph& g);

/// Hop-count betweenness on the directed graph, divided by (N-1)(N-2).
NodeMetricVector betweenness(const MultilayerGraph& g);
NodeMetricVector betweenness_serial(const MultilayerGraph& g);

/// Mean of 1/hops over all N(N-1) ordered pairs; unreachable pairs add 0.
double global_efficiency(const MultilayerGraph& g);
double global_efficiency_serial(const MultilayerGraph& g);

/// Mean of crow-flight / network meters over connected ordered pairs with a
/// non-zero crow-flight distance. Returns 0 when no pair qualifies.
double geospatial_efficiency(const MultilayerGraph& g);
double geospatial_efficiency_serial(const MultilayerGraph& g);

struct PathStats {
  int l_max = 0;
  double avg_l = 0.0;
};

/// Diameter over connected pairs and the mean hop length with unreachable
/// pairs counted at the diameter. Throws NumericalError with no connected pair.
PathStats path_stats(const MultilayerGraph& g);
PathStats path_stats_serial(const MultilayerGraph& g);

/// Fraction of nodes in the largest weakly connected component.
double largest_component_fraction(const MultilayerGraph& g);

struct NetworkSummary {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  std::size_t n_imt_edges = 0;
  double avg_out_degree = 0.0;
  double s0 = 0.0;
  int diameter_l_max = 0;
  double avg_path_len = 0.0;
  double efficiency_e = 0.0;
  double efficiency_geo = 0.0;
  double avg_edge_len_m = 0.0;
  double std_edge_len_m = 0.0;
  /// NaN when the metric vector has zero mean.
  double gini_nd = 0.0;
  double gini_bc = 0.0;
};

NetworkSummary summarize(const MultilayerGraph& g);

}  // namespace mptn
