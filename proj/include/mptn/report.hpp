#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mptn/cascade.hpp"
#include "mptn/graph.hpp"
#include "mptn/metrics.hpp"
#include "mptn/motifs.hpp"
#include "mptn/nullmodel.hpp"
#include "mptn/resilience.hpp"
#include "mptn/theory.hpp"

// Writers for every artifact the CLI produces. CSV files use '.' decimals,
// UTF-8 and '\n' line endings; reals use the shortest round-trip form.
namespace mptn::report {

nlohmann::ordered_json to_json(const NetworkSummary& s);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

/// id,degree,out_degree,betweenness
void write_node_metrics(const std::filesystem::path& path, const MultilayerGraph& g);
/// q,s
void write_curve(const std::filesystem::path& path, const DegradationCurve& curve);
/// id,rl (evaluated nodes only)
void write_relocation(const std::filesystem::path& path, const MultilayerGraph& g,
                      const RelocationResult& result);
/// id,score / src,dst,score / one id per line
void write_motif_nodes(const std::filesystem::path& path, const MultilayerGraph& g, const MotifCensus& c);
void write_motif_edges(const std::filesystem::path& path, const MultilayerGraph& g,
                       std::span<const RankedEdge> ranked);
void write_id_list(const std::filesystem::path& path, const MultilayerGraph& g,
                   std::span<const NodeIndex> ids);
/// round,edges_failed (round 0 is the removal of edges incident to failed nodes)
void write_cascade_rounds(const std::filesystem::path& path, const CascadeState& state);
nlohmann::ordered_json to_json(const MultilayerGraph& g, const CascadeState& state);
/// <x_name>,damage
void write_sweep(const std::filesystem::path& path, const std::string& x_name,
                 std::span<const SweepPoint> points);
/// id,r_recover
void write_recoverability(const std::filesystem::path& path, const MultilayerGraph& g,
                          std::span<const double> values);
/// name,<names...> header then one row per metric
void write_correlation(const std::filesystem::path& path, const CorrelationMatrix& m);
/// d_imt,imt_edges,rb_random,rb_targeted,rl_750
void write_pareto(const std::filesystem::path& path, std::span<const ParetoPoint> points);
std::vector<ParetoPoint> read_pareto(const std::filesystem::path& path);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view bytes);
std::string file_hash(const std::filesystem::path& path);

}  // namespace mptn::report
