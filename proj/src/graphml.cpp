#include "mptn/graphml.hpp"

#include <charconv>
#include <map>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/core.h>

#include "mptn/csv.hpp"
#include "mptn/error.hpp"

namespace mptn {
namespace {

namespace pt = boost::property_tree;

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

double to_real(const std::string& text, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError(fmt::format("graphml: bad {} value '{}'", what, text));
  }
  return v;
}

// <data key="..."> children of a node/edge element.
std::map<std::string, std::string> data_of(const pt::ptree& element) {
  std::map<std::string, std::string> out;
  for (const auto& [tag, child] : element) {
    if (tag != "data") continue;
    out[child.get<std::string>("<xmlattr>.key", "")] = trim(child.get_value<std::string>());
  }
  return out;
}

const std::string& require(const std::map<std::string, std::string>& data, const std::string& key,
                           std::string_view owner) {
  auto it = data.find(key);
  if (it == data.end()) throw InputError(fmt::format("graphml: {} lacks '{}'", owner, key));
  return it->second;
}

}  // namespace

std::string to_graphml(const MultilayerGraph& g) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  out += "  <key id=\"d_imt\" for=\"graph\" attr.name=\"d_imt\" attr.type=\"double\"/>\n";
  out += "  <key id=\"mode\" for=\"node\" attr.name=\"mode\" attr.type=\"string\"/>\n";
  out += "  <key id=\"lat\" for=\"node\" attr.name=\"lat\" attr.type=\"double\"/>\n";
  out += "  <key id=\"lon\" for=\"node\" attr.name=\"lon\" attr.type=\"double\"/>\n";
  out += "  <key id=\"in_core\" for=\"node\" attr.name=\"in_core\" attr.type=\"boolean\"/>\n";
  out += "  <key id=\"kind\" for=\"edge\" attr.name=\"kind\" attr.type=\"string\"/>\n";
  out += "  <key id=\"length_m\" for=\"edge\" attr.name=\"length_m\" attr.type=\"double\"/>\n";
  out += "  <graph id=\"G\" edgedefault=\"directed\">\n";
  out += fmt::format("    <data key=\"d_imt\">{}</data>\n", fmt_real(g.d_imt()));
  for (const auto& s : g.stations()) {
    out += fmt::format(
        "    <node id=\"{}\"><data key=\"mode\">{}</data><data key=\"lat\">{}</data>"
        "<data key=\"lon\">{}</data><data key=\"in_core\">{}</data></node>\n",
        escape(s.id), to_string(s.mode), fmt_real(s.lat), fmt_real(s.lon),
        s.in_core ? "true" : "false");
  }
  for (const auto& e : g.edges()) {
    out += fmt::format(
        "    <edge source=\"{}\" target=\"{}\"><data key=\"kind\">{}</data>"
        "<data key=\"length_m\">{}</data></edge>\n",
        escape(g.station(e.src).id), escape(g.station(e.dst).id), to_string(e.kind),
        fmt_real(e.length_m));
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

MultilayerGraph from_graphml(std::string_view document) {
  pt::ptree tree;
  std::istringstream in{std::string(document)};
  try {
    pt::read_xml(in, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& err) {
    throw InputError(fmt::format("graphml: line {}: {}", err.line(), err.message()));
  }
  const auto root = tree.get_child_optional("graphml");
  if (!root) throw InputError("graphml: missing <graphml> root element");
  const auto graph = root->get_child_optional("graph");
  if (!graph) throw InputError("graphml: missing <graph> element");

  double d_imt = 0.0;
  std::vector<Station> stations;
  std::vector<EdgeRecord> edges;
  for (const auto& [tag, child] : *graph) {
    if (tag == "data") {
      if (child.get<std::string>("<xmlattr>.key", "") == "d_imt") {
        d_imt = to_real(trim(child.get_value<std::string>()), "d_imt");
      }
    } else if (tag == "node") {
      const auto id = child.get<std::string>("<xmlattr>.id", "");
      if (id.empty()) throw InputError("graphml: node without id");
      const auto data = data_of(child);
      const auto owner = fmt::format("node '{}'", id);
      auto mode = parse_mode(require(data, "mode", owner));
      if (!mode) throw InputError(fmt::format("graphml: {} has unknown mode", owner));
      const auto& core = require(data, "in_core", owner);
      if (core != "true" && core != "false") {
        throw InputError(fmt::format("graphml: {} has bad in_core '{}'", owner, core));
      }
      stations.push_back({id, *mode, to_real(require(data, "lat", owner), "lat"),
                          to_real(require(data, "lon", owner), "lon"), core == "true"});
    } else if (tag == "edge") {
      const auto src = child.get<std::string>("<xmlattr>.source", "");
      const auto dst = child.get<std::string>("<xmlattr>.target", "");
      const auto data = data_of(child);
      const auto owner = fmt::format("edge '{}'->'{}'", src, dst);
      auto kind = parse_edge_kind(require(data, "kind", owner));
      if (!kind) throw InputError(fmt::format("graphml: {} has unknown kind", owner));
      edges.push_back({src, dst, *kind, to_real(require(data, "length_m", owner), "length_m")});
    }
  }
  return MultilayerGraph::from_records(std::move(stations), edges, d_imt);
}

void save_graphml(const std::filesystem::path& path, const MultilayerGraph& g) {
  auto out = open_output(path);
  out << to_graphml(g);
}

MultilayerGraph load_graphml(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_graphml(buf.str());
}

}  // namespace mptn
