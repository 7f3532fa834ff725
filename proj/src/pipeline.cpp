#include "mptn/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <fmt/core.h>

#include "mptn/cascade.hpp"
#include "mptn/csv.hpp"
#include "mptn/error.hpp"
#include "mptn/graphml.hpp"
#include "mptn/motifs.hpp"
#include "mptn/report.hpp"
#include "mptn/resilience.hpp"
#include "mptn/theory.hpp"

namespace mptn {
namespace {

using nlohmann::ordered_json;

std::string unquote(std::string v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

std::vector<std::string> list_items(std::string v) {
  v = trim(v);
  if (!v.empty() && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<std::string> items;
  if (trim(v).empty()) return items;
  for (auto& f : split_csv_line(v)) items.push_back(unquote(f));
  return items;
}

double real_value(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InputError(fmt::format("config key '{}': expected a number, got '{}'", key, v));
  }
}

std::size_t count_value(const std::string& key, const std::string& v) {
  const double x = real_value(key, v);
  if (x < 0 || x != std::floor(x)) throw InputError(fmt::format("config key '{}': expected a count", key));
  return static_cast<std::size_t>(x);
}

bool bool_value(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw InputError(fmt::format("config key '{}': expected true/false, got '{}'", key, v));
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const NumericalError& e) {
    throw NumericalError(fmt::format("stage '{}': {}", name, e.what()));
  } catch (const InputError& e) {
    throw InputError(fmt::format("stage '{}': {}", name, e.what()));
  }
}

double z_or_nan(double x, const NullModelEnsemble& e) {
  return e.sigma_rand > 0.0 ? z_score(x, e) : std::numeric_limits<double>::quiet_NaN();
}

std::string join_reals(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt_real(v[i]);
  return out;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  const auto a = text.find(':');
  const auto b = text.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) {
    throw InputError(fmt::format("range '{}' must look like start:stop:step", text));
  }
  const double start = real_value("range", text.substr(0, a));
  const double stop = real_value("range", text.substr(a + 1, b - a - 1));
  const double step = real_value("range", text.substr(b + 1));
  if (!(step > 0.0) || stop < start) throw InputError(fmt::format("range '{}' is empty or has a bad step", text));
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open config '{}'", path.string()));
  RunConfig c;
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& v) {
    std::filesystem::path p = unquote(v);
    return p.is_relative() ? base / p : p;
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(fmt::format("{}:{}: expected key = value", path.string(), lineno));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = unquote(trim(line.substr(eq + 1)));
    if (key == "stations") c.stations = resolve(value);
    else if (key == "routes") c.routes = resolve(value);
    else if (key == "output_dir") c.output_dir = resolve(value);
    else if (key == "core_only") c.core_only = bool_value(key, value);
    else if (key == "d_imt") c.d_imt = real_value(key, value);
    else if (key == "seed") c.seed = count_value(key, value);
    else if (key == "od_samples") c.od_samples = count_value(key, value);
    else if (key == "exhaustive") c.exhaustive = bool_value(key, value);
    else if (key == "repeats") c.repeats = count_value(key, value);
    else if (key == "replicas") c.replicas = count_value(key, value);
    else if (key == "beta") c.beta = real_value(key, value);
    else if (key == "top_k") c.top_k = count_value(key, value);
    else if (key == "d_max") {
      c.d_max.clear();
      for (auto& v : list_items(value)) c.d_max.push_back(real_value(key, v));
    } else if (key == "beta_sweep") {
      if (value.find(':') != std::string::npos) {
        c.beta_sweep = parse_range(value);
      } else {
        c.beta_sweep.clear();
        for (auto& v : list_items(value)) c.beta_sweep.push_back(real_value(key, v));
      }
    } else if (key == "shock_ks") {
      c.shock_ks.clear();
      for (auto& v : list_items(value)) c.shock_ks.push_back(count_value(key, v));
    } else if (key == "pareto_dimt") {
      c.pareto_dimt.clear();
      for (auto& v : list_items(value)) c.pareto_dimt.push_back(real_value(key, v));
    } else {
      throw InputError(fmt::format("{}:{}: unknown key '{}'", path.string(), lineno, key));
    }
  }
  if (c.repeats == 0) throw InputError("repeats must be at least 1");
  return c;
}

std::string canonical_config(const RunConfig& c) {
  std::string out;
  out += "stations=" + report::file_hash(c.stations) + "\n";
  out += "routes=" + report::file_hash(c.routes) + "\n";
  out += fmt::format("core_only={}\nd_imt={}\nseed={}\nod_samples={}\nexhaustive={}\n", c.core_only,
                     fmt_real(c.d_imt), c.seed, c.od_samples, c.exhaustive);
  out += fmt::format("repeats={}\nreplicas={}\nbeta={}\ntop_k={}\n", c.repeats, c.replicas,
                     fmt_real(c.beta), c.top_k);
  out += "d_max=" + join_reals(c.d_max) + "\n";
  out += "beta_sweep=" + join_reals(c.beta_sweep) + "\n";
  out += "shock_ks=";
  for (std::size_t i = 0; i < c.shock_ks.size(); ++i) out += (i ? "," : "") + std::to_string(c.shock_ks[i]);
  out += "\npareto_dimt=" + join_reals(c.pareto_dimt) + "\n";
  return out;
}

MultilayerGraph build_configured_graph(const RunConfig& config) {
  if (config.stations.empty()) throw InputError("no stations file configured");
  if (config.routes.empty()) throw InputError("no routes file configured");
  const auto stations = read_stations_csv(config.stations);
  const auto routes = read_routes_csv(config.routes);
  return add_transfer_edges(build_graph(routes, stations, config.core_only), config.d_imt).graph;
}

GraphMetric named_metric(const std::string& name, std::size_t repeats, std::uint64_t seed) {
  if (name == "efficiency") return [](const MultilayerGraph& g) { return global_efficiency(g); };
  if (name == "geo-efficiency") return [](const MultilayerGraph& g) { return geospatial_efficiency(g); };
  if (name == "rb-random") {
    return [repeats, seed](const MultilayerGraph& g) {
      return degradation_curve(g, AttackStrategy::random(seed), repeats).r_b;
    };
  }
  if (name == "rb-degree") {
    return [](const MultilayerGraph& g) {
      return degradation_curve(g, AttackStrategy::targeted(AttackKind::DegreeTargeted)).r_b;
    };
  }
  throw InputError(fmt::format("unknown metric '{}'", name));
}

std::vector<StepRow> stepwise_integration(const RunConfig& config) {
  const auto stations = read_stations_csv(config.stations);
  const auto routes = read_routes_csv(config.routes);
  const std::vector<std::pair<std::string, Mode>> steps = {
      {"metro", Mode::Metro}, {"+bus", Mode::Bus}, {"+ferry", Mode::Ferry}, {"+railway", Mode::Railway}};
  std::vector<StepRow> rows;
  std::vector<Mode> modes;
  for (const auto& [name, mode] : steps) {
    modes.push_back(mode);
    const auto [st, rt] = filter_modes(stations, routes, modes);
    const auto base = build_graph(rt, st, config.core_only);
    if (base.empty()) continue;
    for (double d : {0.0, 100.0}) {
      StepRow row;
      row.step = name;
      row.d_imt = d;
      const auto g = add_transfer_edges(base, d).graph;
      row.summary = summarize(g);
      const auto eff = build_ensemble(g, named_metric("efficiency", 1, config.seed), "efficiency",
                                      config.replicas, config.seed);
      const auto geo = build_ensemble(g, named_metric("geo-efficiency", 1, config.seed), "geo-efficiency",
                                      config.replicas, config.seed);
      row.z_efficiency = z_or_nan(row.summary.efficiency_e, eff);
      row.z_efficiency_geo = z_or_nan(row.summary.efficiency_geo, geo);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_stepwise(const std::filesystem::path& path, const std::vector<StepRow>& rows) {
  auto out = open_output(path);
  out << "step,d_imt,n_nodes,n_edges,n_imt_edges,avg_out_degree,s0,diameter_l_max,avg_path_len,"
         "efficiency_e,z_efficiency,efficiency_geo,z_efficiency_geo,avg_edge_len_m,std_edge_len_m,"
         "gini_nd,gini_bc\n";
  for (const auto& r : rows) {
    const auto& s = r.summary;
    out << r.step << ',' << fmt_real(r.d_imt) << ',' << s.n_nodes << ',' << s.n_edges << ','
        << s.n_imt_edges << ',' << fmt_real(s.avg_out_degree) << ',' << fmt_real(s.s0) << ','
        << s.diameter_l_max << ',' << fmt_real(s.avg_path_len) << ',' << fmt_real(s.efficiency_e) << ','
        << fmt_real(r.z_efficiency) << ',' << fmt_real(s.efficiency_geo) << ','
        << fmt_real(r.z_efficiency_geo) << ',' << fmt_real(s.avg_edge_len_m) << ','
        << fmt_real(s.std_edge_len_m) << ',' << fmt_real(s.gini_nd) << ',' << fmt_real(s.gini_bc) << '\n';
  }
}

Manifest run_all(const RunConfig& config) {
  const auto& dir = config.output_dir;
  std::filesystem::create_directories(dir);
  Manifest manifest;
  manifest.seed = config.seed;
  manifest.config_hash = stage("config", [&] { return report::fnv1a_hex(canonical_config(config)); });
  std::vector<std::string> files;
  auto out = [&](const std::string& name) {
    files.push_back(name);
    return dir / name;
  };

  const auto g = stage("build", [&] {
    auto graph = build_configured_graph(config);
    save_graphml(out("graph.graphml"), graph);
    return graph;
  });

  stage("metrics", [&] {
    report::write_json(out("summary.json"), report::to_json(summarize(g)));
    report::write_node_metrics(out("nodes.csv"), g);
    return 0;
  });

  stage("attack", [&] {
    ordered_json summary;
    for (auto kind : {AttackKind::Random, AttackKind::DegreeTargeted, AttackKind::BetweennessTargeted,
                      AttackKind::MotifImportance}) {
      const auto strategy = kind == AttackKind::Random ? AttackStrategy::random(config.seed)
                                                       : AttackStrategy::targeted(kind);
      const auto curve = degradation_curve(g, strategy, config.repeats);
      report::write_curve(out(fmt::format("curve_{}.csv", to_string(kind))), curve);
      summary[std::string(to_string(kind))] = curve.r_b;
    }
    report::write_json(out("attack_summary.json"), summary);
    return 0;
  });

  stage("relocate", [&] {
    ordered_json summary = ordered_json::array();
    for (double d_max : config.d_max) {
      for (auto model : {RelocationModel::Symmetric, RelocationModel::Asymmetric}) {
        const auto result = relocation_rate(g, d_max, model);
        report::write_relocation(out(fmt::format("relocation_{}_{}.csv", to_string(model), fmt_real(d_max))), g,
                                 result);
        summary.push_back({{"model", to_string(model)},
                           {"d_max", d_max},
                           {"applicable", result.applicable},
                           {"network_rl", result.network_rl}});
      }
    }
    report::write_json(out("relocation_summary.json"), summary);
    return 0;
  });

  const auto census = stage("motifs", [&] {
    auto c = enumerate_ffl(g);
    report::write_motif_nodes(out("motif_nodes.csv"), g, c);
    report::write_motif_edges(out("motif_edges.csv"), g, structural_hierarchy(g, config.top_k));
    report::write_id_list(out("motif_attack_order.txt"), g, motif_attack_order(c));
    return c;
  });

  const auto recoverability = stage("cascade", [&] {
    const auto loads = estimate_loads(g, config.od_samples, config.seed, config.exhaustive);
    const auto ranking = throughput_ranking(g, loads);
    const auto hub = ranking.front();
    const auto state = run_cascade(g, loads, config.beta, std::span(&hub, 1));
    report::write_cascade_rounds(out("cascade_rounds.csv"), state);
    report::write_json(out("cascade_summary.json"), report::to_json(g, state));
    report::write_sweep(out("beta_sweep.csv"), "beta", beta_sweep(g, loads, config.beta_sweep, hub));
    std::vector<std::size_t> ks;
    for (auto k : config.shock_ks) {
      if (k <= g.node_count()) ks.push_back(k);
    }
    report::write_sweep(out("shock_sweep.csv"), "k", shock_sweep(g, loads, config.beta, ks));
    auto profile = recoverability_profile(g, loads, config.beta);
    report::write_recoverability(out("recoverability.csv"), g, profile);
    return profile;
  });

  stage("nullmodel", [&] {
    ordered_json doc;
    for (const std::string name : {"efficiency", "geo-efficiency", "rb-random", "rb-degree"}) {
      const auto metric = named_metric(name, config.repeats, config.seed);
      const auto ensemble = build_ensemble(g, metric, name, config.replicas, config.seed);
      const double x = metric(g);
      doc[name] = {{"x_real", x},
                   {"mu", ensemble.mu_rand},
                   {"sigma", ensemble.sigma_rand},
                   {"z", z_or_nan(x, ensemble)}};
    }
    report::write_json(out("nullmodel.json"), doc);
    return 0;
  });

  stage("correlate", [&] {
    NodeMetricVector motif{"motif_score", {census.node_score.begin(), census.node_score.end()}};
    const auto matrix =
        static_vs_dynamic_report(recoverability, {degree_vector(g), betweenness(g), motif});
    report::write_correlation(out("correlation.csv"), matrix);
    return 0;
  });

  stage("pareto", [&] {
    ParetoOptions options;
    options.repeats = config.repeats;
    options.seed = config.seed;
    report::write_pareto(out("pareto.csv"), pareto_sweep(g, config.pareto_dimt, options));
    return 0;
  });

  stage("stepwise", [&] {
    write_stepwise(out("stepwise.csv"), stepwise_integration(config));
    return 0;
  });

  for (const auto& f : files) manifest.artifacts.push_back({f, report::file_hash(dir / f)});
  ordered_json doc;
  doc["config_hash"] = manifest.config_hash;
  doc["seed"] = manifest.seed;
  auto artifacts = ordered_json::array();
  for (const auto& a : manifest.artifacts) {
    artifacts.push_back({{"file", a.file}, {"fnv1a", a.hash}, {"seed", manifest.seed}});
  }
  doc["artifacts"] = artifacts;
  report::write_json(dir / "manifest.json", doc);
  return manifest;
}

}  // namespace mptn
