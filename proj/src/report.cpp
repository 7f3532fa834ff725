#include "mptn/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "mptn/csv.hpp"
#include "mptn/error.hpp"

namespace mptn::report {

using nlohmann::ordered_json;

ordered_json to_json(const NetworkSummary& s) {
  ordered_json j;
  j["n_nodes"] = s.n_nodes;
  j["n_edges"] = s.n_edges;
  j["n_imt_edges"] = s.n_imt_edges;
  j["avg_out_degree"] = s.avg_out_degree;
  j["s0"] = s.s0;
  j["diameter_l_max"] = s.diameter_l_max;
  j["avg_path_len"] = s.avg_path_len;
  j["efficiency_e"] = s.efficiency_e;
  j["efficiency_geo"] = s.efficiency_geo;
  j["avg_edge_len_m"] = s.avg_edge_len_m;
  j["std_edge_len_m"] = s.std_edge_len_m;
  j["gini_nd"] = s.gini_nd;
  j["gini_bc"] = s.gini_bc;
  return j;
}

void write_json(const std::filesystem::path& path, const ordered_json& doc) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

void write_node_metrics(const std::filesystem::path& path, const MultilayerGraph& g) {
  const auto bc = betweenness(g);
  auto out = open_output(path);
  out << "id,degree,out_degree,betweenness\n";
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    out << g.station(i).id << ',' << g.degree(i) << ',' << g.out_degree(i) << ','
        << fmt_real(bc.values[i]) << '\n';
  }
}

void write_curve(const std::filesystem::path& path, const DegradationCurve& curve) {
  auto out = open_output(path);
  out << "q,s\n";
  for (const auto& p : curve.points) out << fmt_real(p.q) << ',' << fmt_real(p.s) << '\n';
}

void write_relocation(const std::filesystem::path& path, const MultilayerGraph& g,
                      const RelocationResult& result) {
  auto out = open_output(path);
  out << "id,rl\n";
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    if (result.per_node[i]) out << g.station(i).id << ',' << fmt_real(*result.per_node[i]) << '\n';
  }
}

void write_motif_nodes(const std::filesystem::path& path, const MultilayerGraph& g, const MotifCensus& c) {
  auto out = open_output(path);
  out << "id,score\n";
  for (NodeIndex i = 0; i < g.node_count(); ++i) out << g.station(i).id << ',' << c.node_score[i] << '\n';
}

void write_motif_edges(const std::filesystem::path& path, const MultilayerGraph& g,
                       std::span<const RankedEdge> ranked) {
  auto out = open_output(path);
  out << "src,dst,score\n";
  for (const auto& r : ranked) {
    const auto& e = g.edge(r.edge);
    out << g.station(e.src).id << ',' << g.station(e.dst).id << ',' << r.score << '\n';
  }
}

void write_id_list(const std::filesystem::path& path, const MultilayerGraph& g,
                   std::span<const NodeIndex> ids) {
  auto out = open_output(path);
  for (auto i : ids) out << g.station(i).id << '\n';
}

void write_cascade_rounds(const std::filesystem::path& path, const CascadeState& state) {
  auto out = open_output(path);
  out << "round,edges_failed\n";
  out << 0 << ',' << state.removed_edges.size() << '\n';
  for (std::size_t r = 0; r < state.rounds.size(); ++r) out << r + 1 << ',' << state.rounds[r].size() << '\n';
}

ordered_json to_json(const MultilayerGraph& g, const CascadeState& state) {
  ordered_json j;
  j["beta"] = state.beta;
  auto nodes = ordered_json::array();
  for (auto v : state.failed_nodes) nodes.push_back(g.station(v).id);
  j["initial_failures"] = nodes;
  j["rounds"] = state.rounds.size();
  j["edges_initial"] = state.edges_initial;
  j["edges_failed"] = state.edges_failed;
  j["r_recover"] = state.r_recover;
  j["total_damage"] = state.total_damage;
  j["first_wave_fraction"] = state.first_wave_fraction;
  return j;
}

void write_sweep(const std::filesystem::path& path, const std::string& x_name,
                 std::span<const SweepPoint> points) {
  auto out = open_output(path);
  out << x_name << ",damage\n";
  for (const auto& p : points) out << fmt_real(p.x) << ',' << p.damage << '\n';
}

void write_recoverability(const std::filesystem::path& path, const MultilayerGraph& g,
                          std::span<const double> values) {
  auto out = open_output(path);
  out << "id,r_recover\n";
  for (NodeIndex i = 0; i < g.node_count(); ++i) out << g.station(i).id << ',' << fmt_real(values[i]) << '\n';
}

void write_correlation(const std::filesystem::path& path, const CorrelationMatrix& m) {
  auto out = open_output(path);
  out << "metric";
  for (const auto& n : m.names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    out << m.names[i];
    for (double r : m.r[i]) out << ',' << fmt_real(r);
    out << '\n';
  }
}

void write_pareto(const std::filesystem::path& path, std::span<const ParetoPoint> points) {
  auto out = open_output(path);
  out << "d_imt,imt_edges,rb_random,rb_targeted,rl_750\n";
  for (const auto& p : points) {
    out << fmt_real(p.d_imt) << ',' << p.imt_edges << ',' << fmt_real(p.rb_random) << ','
        << fmt_real(p.rb_targeted) << ',' << fmt_real(p.rl_750) << '\n';
  }
}

std::vector<ParetoPoint> read_pareto(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  std::string line;
  std::getline(in, line);
  if (split_csv_line(line) != std::vector<std::string>{"d_imt", "imt_edges", "rb_random", "rb_targeted", "rl_750"}) {
    throw InputError(fmt::format("{}:1: unexpected header", path.string()));
  }
  std::vector<ParetoPoint> points;
  std::size_t lineno = 1;
  auto real = [&](const std::string& s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw InputError(fmt::format("{}:{}: bad number '{}'", path.string(), lineno, s));
    }
    return v;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 5) throw InputError(fmt::format("{}:{}: expected 5 fields", path.string(), lineno));
    points.push_back({real(f[0]), static_cast<std::size_t>(real(f[1])), real(f[2]), real(f[3]), real(f[4])});
  }
  return points;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return fnv1a_hex(buf.str());
}

}  // namespace mptn::report
