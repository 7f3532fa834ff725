#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mptn/build.hpp"
#include "mptn/metrics.hpp"
#include "mptn/nullmodel.hpp"

namespace mptn {

/// Settings shared by every analysis. Loaded from a `key = value` file
/// (`#` starts a comment, lists are comma separated, optionally in [ ]).
struct RunConfig {
  std::filesystem::path stations;
  std::filesystem::path routes;
  std::filesystem::path output_dir = "out";
  bool core_only = true;
  double d_imt = 100.0;
  std::uint64_t seed = 42;
  std::size_t od_samples = 10'000;
  bool exhaustive = false;
  std::size_t repeats = 50;
  std::vector<double> d_max = {750.0, 1600.0};
  std::size_t replicas = 50;
  double beta = 0.2;
  std::vector<double> beta_sweep = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5,
                                    0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0};
  std::vector<std::size_t> shock_ks = {0, 1, 2, 4, 8, 16, 32};
  std::vector<double> pareto_dimt = {0.0, 50.0, 100.0, 150.0, 200.0};
  std::size_t top_k = 20;
};

/// Relative input paths resolve against the config file's directory.
RunConfig load_config(const std::filesystem::path& path);

/// Parses "a:b:step" into an ascending list including both ends.
std::vector<double> parse_range(const std::string& text);

/// Canonical text of everything that influences results: input file hashes
/// and all numeric settings, but not the output directory.
std::string canonical_config(const RunConfig& config);

/// Intra-modal graph from the configured inputs plus transfer edges at d_imt.
MultilayerGraph build_configured_graph(const RunConfig& config);

/// Scalar network metrics usable with the null model: "efficiency",
/// "geo-efficiency", "rb-random" (repeats, seed) and "rb-degree".
GraphMetric named_metric(const std::string& name, std::size_t repeats, std::uint64_t seed);

struct StepRow {
  std::string step;
  double d_imt = 0.0;
  NetworkSummary summary;
  double z_efficiency = 0.0;      // NaN when the ensemble is degenerate
  double z_efficiency_geo = 0.0;
};

/// Cumulative build metro -> +bus -> +ferry -> +railway, each at
/// d_imt = 0 and 100 m, with null-model Z-scores for both efficiencies.
std::vector<StepRow> stepwise_integration(const RunConfig& config);
void write_stepwise(const std::filesystem::path& path, const std::vector<StepRow>& rows);

struct ManifestEntry {
  std::string file;
  std::string hash;
};

struct Manifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<ManifestEntry> artifacts;
};

/// Runs every analysis into config.output_dir and writes manifest.json.
/// A failing stage rethrows with the stage name; files already written stay.
Manifest run_all(const RunConfig& config);

}  // namespace mptn
