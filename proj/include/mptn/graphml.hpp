#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mptn/graph.hpp"

namespace mptn {

/// GraphML document with node keys mode/lat/lon/in_core, edge keys
/// kind/length_m and a graph-level d_imt. Reals are written in shortest
/// round-trip form, so reading the document back reproduces the graph exactly.
std::string to_graphml(const MultilayerGraph& g);

/// Throws InputError carrying the line number on malformed documents.
MultilayerGraph from_graphml(std::string_view document);

void save_graphml(const std::filesystem::path& path, const MultilayerGraph& g);
MultilayerGraph load_graphml(const std::filesystem::path& path);

}  // namespace mptn
