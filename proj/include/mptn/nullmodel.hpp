#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mptn/graph.hpp"
#include "mptn/metrics.hpp"

namespace mptn {

/// Erdos-Renyi replica: same stations, exactly |E| directed edges drawn
/// uniformly without replacement from all ordered non-loop pairs. Lengths are
/// recomputed with haversine and the kind follows the endpoint modes.
MultilayerGraph random_replica(const MultilayerGraph& g, std::uint64_t seed);

struct NullModelEnsemble {
  std::string metric_name;
  double mu_rand = 0.0;
  double sigma_rand = 0.0;  // sample standard deviation
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;
};

using GraphMetric = std::function<double(const MultilayerGraph&)>;

/// Evaluates `metric` on `replicas` seeded replicas (replica r uses stream r
/// of `seed`). Requires replicas >= 2.
NullModelEnsemble build_ensemble(const MultilayerGraph& g, const GraphMetric& metric,
                                 std::string metric_name, std::size_t replicas, std::uint64_t seed);

/// Mean and sample standard deviation (two-pass).
NullModelEnsemble ensemble_from_values(std::string metric_name, std::vector<double> values,
                                       std::uint64_t seed = 0);

/// (x_real - mu) / sigma. Throws NumericalError when sigma is 0.
double z_score(double x_real, const NullModelEnsemble& ensemble);

/// Product-moment correlation. Throws InputError on length mismatch or fewer
/// than 3 points, NumericalError when either input is constant.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> r;
};

/// Pairwise Pearson correlations among the given node metrics and
/// recoverability (appended as the last row/column).
CorrelationMatrix static_vs_dynamic_report(std::span<const double> recoverability,
                                           const std::vector<NodeMetricVector>& metrics);

}  // namespace mptn
