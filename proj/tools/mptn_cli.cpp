// Command-line front end: one subcommand per analysis.
// Exit codes: 0 success, 2 input error, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "mptn/build.hpp"
#include "mptn/cascade.hpp"
#include "mptn/csv.hpp"
#include "mptn/error.hpp"
#include "mptn/graphml.hpp"
#include "mptn/metrics.hpp"
#include "mptn/motifs.hpp"
#include "mptn/nullmodel.hpp"
#include "mptn/pipeline.hpp"
#include "mptn/report.hpp"
#include "mptn/resilience.hpp"
#include "mptn/synth.hpp"
#include "mptn/theory.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct GlobalOptions {
  std::string config;
  int threads = 0;
  std::string out = "out";
};

struct GraphSource {
  std::string graph;
  std::string stations;
  std::string routes;
  std::string cache;
  double d_imt = 100.0;
  bool all_stops = false;
  CLI::Option* d_imt_opt = nullptr;
};

void add_graph_options(CLI::App* cmd, GraphSource& src, bool with_dimt = true) {
  cmd->add_option("--graph", src.graph, "Cached GraphML graph");
  cmd->add_option("--stations", src.stations, "stations.csv");
  cmd->add_option("--routes", src.routes, "routes.csv");
  if (with_dimt) src.d_imt_opt = cmd->add_option("--dimt", src.d_imt, "Transfer distance threshold in meters");
  cmd->add_flag("--all-stops", src.all_stops, "Use whole routes instead of core segments");
  cmd->add_option("--cache", src.cache, "GraphML cache: loaded if present, written otherwise");
}

mptn::RunConfig base_config(const GlobalOptions& global) {
  auto cfg = global.config.empty() ? mptn::RunConfig{} : mptn::load_config(global.config);
  if (!global.config.empty() && global.out == "out") return cfg;
  cfg.output_dir = global.out;
  return cfg;
}

mptn::RunConfig with_source(mptn::RunConfig cfg, const GraphSource& src) {
  if (!src.stations.empty()) cfg.stations = src.stations;
  if (!src.routes.empty()) cfg.routes = src.routes;
  if (src.d_imt_opt && src.d_imt_opt->count() > 0) cfg.d_imt = src.d_imt;
  if (src.all_stops) cfg.core_only = false;
  return cfg;
}

mptn::MultilayerGraph load_graph(const mptn::RunConfig& cfg, const GraphSource& src) {
  if (!src.graph.empty()) return mptn::load_graphml(src.graph);
  if (!src.cache.empty() && fs::exists(src.cache)) return mptn::load_graphml(src.cache);
  auto g = mptn::build_configured_graph(cfg);
  if (!src.cache.empty()) mptn::save_graphml(src.cache, g);
  return g;
}

template <typename T>
void override_if(const CLI::Option* opt, T& field, const T& value) {
  if (opt->count() > 0) field = value;
}

void print(const ordered_json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimodal transport network resilience toolkit"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_option("--config", global.config, "key = value run configuration");
  app.add_option("--threads", global.threads, "OpenMP thread count (0 = runtime default)");
  app.add_option("--out", global.out, "Output directory");

  // generate
  auto* generate = app.add_subcommand("generate", "Write a synthetic city (stations.csv, routes.csv)");
  mptn::SyntheticCitySpec city;
  generate->add_option("--n-metro", city.n_metro);
  generate->add_option("--n-bus", city.n_bus);
  generate->add_option("--n-ferry", city.n_ferry);
  generate->add_option("--n-rail", city.n_rail);
  generate->add_option("--seed", city.seed);
  generate->add_option("--area-km", city.area_km);

  // build
  auto* build = app.add_subcommand("build", "Build the multilayer graph and write GraphML");
  GraphSource build_src;
  add_graph_options(build, build_src);
  std::string build_output;
  build->add_option("-o,--output", build_output, "GraphML output file")->required();

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Network summary and per-node metrics");
  GraphSource metrics_src;
  add_graph_options(metrics, metrics_src);

  // attack
  auto* attack = app.add_subcommand("attack", "Node-removal degradation curves and r_b");
  GraphSource attack_src;
  add_graph_options(attack, attack_src);
  std::string strategy = "all";
  std::size_t repeats = 50;
  std::uint64_t attack_seed = 42;
  bool adaptive = false;
  attack->add_option("--strategy", strategy, "random|degree|betweenness|motif|all");
  auto* attack_repeats = attack->add_option("--repeats", repeats);
  auto* attack_seed_opt = attack->add_option("--seed", attack_seed);
  attack->add_flag("--adaptive", adaptive, "Recompute the targeting metric after each removal");

  // relocate
  auto* relocate = app.add_subcommand("relocate", "Relocation rate per node and network average");
  GraphSource relocate_src;
  add_graph_options(relocate, relocate_src);
  std::vector<double> dmax = {750.0};
  std::string model_name = "symmetric";
  relocate->add_option("--dmax", dmax, "Maximum transfer distance in meters (repeatable)");
  relocate->add_option("--model", model_name, "symmetric|asymmetric|both");

  // motifs
  auto* motifs = app.add_subcommand("motifs", "Feed-forward loop census and motif attack order");
  GraphSource motifs_src;
  add_graph_options(motifs, motifs_src);
  std::size_t top_k = 20;
  auto* top_k_opt = motifs->add_option("--top-k", top_k);

  // cascade
  auto* cascade = app.add_subcommand("cascade", "Load-capacity cascading failure");
  GraphSource cascade_src;
  add_graph_options(cascade, cascade_src);
  double beta = 0.2;
  std::string target;
  bool all_nodes = false;
  std::size_t od_samples = mptn::kDefaultOdSamples;
  std::uint64_t cascade_seed = mptn::kDefaultOdSeed;
  bool exhaustive = false;
  std::string beta_range;
  std::vector<std::size_t> shock_ks;
  auto* beta_opt = cascade->add_option("--beta", beta, "Capacity tolerance");
  cascade->add_option("--target", target, "Station id of the initial failure (default: max-load node)");
  cascade->add_flag("--all-nodes", all_nodes, "Recoverability profile over every node");
  auto* od_opt = cascade->add_option("--od-samples", od_samples);
  auto* cseed_opt = cascade->add_option("--seed", cascade_seed);
  auto* exh_opt = cascade->add_flag("--exhaustive", exhaustive, "Route every connected pair");
  cascade->add_option("--beta-sweep", beta_range, "start:stop:step");
  cascade->add_option("--shock-sweep", shock_ks, "k1,k2,...")->delimiter(',');

  // nullmodel
  auto* nullmodel = app.add_subcommand("nullmodel", "Z-score against an Erdos-Renyi ensemble");
  GraphSource null_src;
  add_graph_options(nullmodel, null_src);
  std::string metric_name = "efficiency";
  std::size_t replicas = 50;
  std::uint64_t null_seed = 42;
  nullmodel->add_option("--metric", metric_name, "efficiency|geo-efficiency|rb-random|rb-degree");
  auto* replicas_opt = nullmodel->add_option("--replicas", replicas);
  auto* nseed_opt = nullmodel->add_option("--seed", null_seed);
  auto* null_repeats = nullmodel->add_option("--repeats", repeats, "Repeats for rb-random");

  // correlate
  auto* correlate = app.add_subcommand("correlate", "Static metrics vs functional recoverability");
  GraphSource corr_src;
  add_graph_options(correlate, corr_src);
  auto* cbeta_opt = correlate->add_option("--beta", beta);
  auto* cod_opt = correlate->add_option("--od-samples", od_samples);
  auto* ccseed_opt = correlate->add_option("--seed", cascade_seed);
  auto* cexh_opt = correlate->add_flag("--exhaustive", exhaustive);

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Optimal integration level d*");
  mptn::UtilityParams params;
  optimize->add_option("--bmax", params.b_max)->required();
  optimize->add_option("--alpha", params.alpha)->required();
  optimize->add_option("--beta", params.beta_risk, "Risk coefficient")->required();
  optimize->add_option("--k", params.k)->required();
  std::string sens_param;
  double sens_delta = 0.1;
  optimize->add_option("--sensitivity", sens_param, "bmax|alpha|beta|k");
  optimize->add_option("--delta", sens_delta, "Relative perturbation for --sensitivity");

  // pareto
  auto* pareto = app.add_subcommand("pareto", "Integration sweep: cost vs robustness");
  GraphSource pareto_src;
  // the sweep rebuilds transfer edges itself, so --dimt here is the list of thresholds
  add_graph_options(pareto, pareto_src, false);
  std::vector<double> pareto_dimt;
  auto* pdimt_opt = pareto->add_option("--dimt", pareto_dimt, "d_imt values, ascending")->delimiter(',');
  auto* prepeats = pareto->add_option("--repeats", repeats);
  auto* pseed = pareto->add_option("--seed", attack_seed);

  // fit
  auto* fit = app.add_subcommand("fit", "Heuristic utility-model fit to a pareto.csv sweep");
  std::string pareto_csv;
  double distance_scale = 100.0;
  fit->add_option("--pareto", pareto_csv)->required();
  fit->add_option("--scale", distance_scale, "Meters per unit of d");

  // stepwise
  auto* stepwise = app.add_subcommand("stepwise", "Cumulative mode-by-mode integration table");
  GraphSource step_src;
  add_graph_options(stepwise, step_src);
  auto* sreplicas = stepwise->add_option("--replicas", replicas);
  auto* sseed = stepwise->add_option("--seed", null_seed);

  // run-all
  auto* run_all = app.add_subcommand("run-all", "Every analysis plus a manifest");
  GraphSource all_src;
  add_graph_options(run_all, all_src);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (global.threads > 0) omp_set_num_threads(global.threads);
    const fs::path out = global.out;

    if (generate->parsed()) {
      const auto c = mptn::generate_city(city);
      mptn::write_stations_csv(out / "stations.csv", c.stations);
      mptn::write_routes_csv(out / "routes.csv", c.routes);
      print({{"stations", c.stations.size()}, {"routes", c.routes.size()}, {"out", out.string()}});
    } else if (build->parsed()) {
      const auto cfg = with_source(base_config(global), build_src);
      const auto stations = mptn::read_stations_csv(cfg.stations);
      const auto routes = mptn::read_routes_csv(cfg.routes);
      const auto t = mptn::add_transfer_edges(mptn::build_graph(routes, stations, cfg.core_only), cfg.d_imt);
      mptn::save_graphml(build_output, t.graph);
      print({{"n_nodes", t.graph.node_count()},
             {"n_edges", t.graph.edge_count()},
             {"d_imt", t.graph.d_imt()},
             {"transfer_pairs", t.pairs_added}});
    } else if (metrics->parsed()) {
      const auto cfg = with_source(base_config(global), metrics_src);
      const auto g = load_graph(cfg, metrics_src);
      const auto summary = mptn::report::to_json(mptn::summarize(g));
      mptn::report::write_json(cfg.output_dir / "summary.json", summary);
      mptn::report::write_node_metrics(cfg.output_dir / "nodes.csv", g);
      print(summary);
    } else if (attack->parsed()) {
      auto cfg = with_source(base_config(global), attack_src);
      override_if(attack_repeats, cfg.repeats, repeats);
      override_if(attack_seed_opt, cfg.seed, attack_seed);
      const auto g = load_graph(cfg, attack_src);
      std::vector<mptn::AttackKind> kinds;
      if (strategy == "all") {
        kinds = {mptn::AttackKind::Random, mptn::AttackKind::DegreeTargeted,
                 mptn::AttackKind::BetweennessTargeted, mptn::AttackKind::MotifImportance};
      } else if (auto k = mptn::parse_attack_kind(strategy)) {
        kinds = {*k};
      } else {
        throw mptn::InputError(fmt::format("unknown strategy '{}'", strategy));
      }
      ordered_json summary;
      for (auto kind : kinds) {
        const auto s = kind == mptn::AttackKind::Random ? mptn::AttackStrategy::random(cfg.seed)
                                                        : mptn::AttackStrategy::targeted(kind, adaptive);
        const auto curve = mptn::degradation_curve(g, s, cfg.repeats);
        mptn::report::write_curve(cfg.output_dir / fmt::format("curve_{}.csv", mptn::to_string(kind)), curve);
        summary[std::string(mptn::to_string(kind))] = curve.r_b;
      }
      mptn::report::write_json(cfg.output_dir / "attack_summary.json", summary);
      print(summary);
    } else if (relocate->parsed()) {
      const auto cfg = with_source(base_config(global), relocate_src);
      const auto g = load_graph(cfg, relocate_src);
      std::vector<mptn::RelocationModel> models;
      if (model_name == "both") {
        models = {mptn::RelocationModel::Symmetric, mptn::RelocationModel::Asymmetric};
      } else if (auto m = mptn::parse_relocation_model(model_name)) {
        models = {*m};
      } else {
        throw mptn::InputError(fmt::format("unknown model '{}'", model_name));
      }
      ordered_json summary = ordered_json::array();
      for (double d : dmax) {
        for (auto m : models) {
          const auto r = mptn::relocation_rate(g, d, m);
          mptn::report::write_relocation(
              cfg.output_dir / fmt::format("relocation_{}_{}.csv", mptn::to_string(m), mptn::fmt_real(d)), g, r);
          summary.push_back({{"model", mptn::to_string(m)},
                             {"d_max", d},
                             {"applicable", r.applicable},
                             {"network_rl", r.network_rl}});
        }
      }
      mptn::report::write_json(cfg.output_dir / "relocation_summary.json", summary);
      print(summary);
    } else if (motifs->parsed()) {
      auto cfg = with_source(base_config(global), motifs_src);
      override_if(top_k_opt, cfg.top_k, top_k);
      const auto g = load_graph(cfg, motifs_src);
      const auto census = mptn::enumerate_ffl(g);
      mptn::report::write_motif_nodes(cfg.output_dir / "motif_nodes.csv", g, census);
      mptn::report::write_motif_edges(cfg.output_dir / "motif_edges.csv", g,
                                      mptn::structural_hierarchy(g, cfg.top_k));
      mptn::report::write_id_list(cfg.output_dir / "motif_attack_order.txt", g,
                                  mptn::motif_attack_order(census));
      print({{"ffl_count", census.ffl_count}});
    } else if (cascade->parsed()) {
      auto cfg = with_source(base_config(global), cascade_src);
      override_if(beta_opt, cfg.beta, beta);
      override_if(od_opt, cfg.od_samples, od_samples);
      override_if(cseed_opt, cfg.seed, cascade_seed);
      override_if(exh_opt, cfg.exhaustive, exhaustive);
      const auto g = load_graph(cfg, cascade_src);
      const auto loads = mptn::estimate_loads(g, cfg.od_samples, cfg.seed, cfg.exhaustive);
      mptn::NodeIndex seed_node = 0;
      if (!target.empty()) {
        auto idx = g.find(target);
        if (!idx) throw mptn::InputError(fmt::format("unknown target station '{}'", target));
        seed_node = *idx;
      } else {
        seed_node = mptn::throughput_ranking(g, loads).front();
      }
      const auto state = mptn::run_cascade(g, loads, cfg.beta, std::span(&seed_node, 1));
      mptn::report::write_cascade_rounds(cfg.output_dir / "cascade_rounds.csv", state);
      const auto summary = mptn::report::to_json(g, state);
      mptn::report::write_json(cfg.output_dir / "cascade_summary.json", summary);
      if (all_nodes) {
        mptn::report::write_recoverability(cfg.output_dir / "recoverability.csv", g,
                                           mptn::recoverability_profile(g, loads, cfg.beta));
      }
      if (!beta_range.empty()) {
        const auto betas = mptn::parse_range(beta_range);
        mptn::report::write_sweep(cfg.output_dir / "beta_sweep.csv", "beta",
                                  mptn::beta_sweep(g, loads, betas, seed_node));
      }
      if (!shock_ks.empty()) {
        mptn::report::write_sweep(cfg.output_dir / "shock_sweep.csv", "k",
                                  mptn::shock_sweep(g, loads, cfg.beta, shock_ks));
      }
      print(summary);
    } else if (nullmodel->parsed()) {
      auto cfg = with_source(base_config(global), null_src);
      override_if(replicas_opt, cfg.replicas, replicas);
      override_if(nseed_opt, cfg.seed, null_seed);
      override_if(null_repeats, cfg.repeats, repeats);
      const auto g = load_graph(cfg, null_src);
      const auto metric = mptn::named_metric(metric_name, cfg.repeats, cfg.seed);
      const auto ensemble = mptn::build_ensemble(g, metric, metric_name, cfg.replicas, cfg.seed);
      const double x = metric(g);
      ordered_json doc{{"metric", metric_name},  {"x_real", x}, {"mu", ensemble.mu_rand},
                       {"sigma", ensemble.sigma_rand}, {"replicas", ensemble.replicas},
                       {"seed", cfg.seed},          {"z", mptn::z_score(x, ensemble)}};
      mptn::report::write_json(cfg.output_dir / fmt::format("nullmodel_{}.json", metric_name), doc);
      print(doc);
    } else if (correlate->parsed()) {
      auto cfg = with_source(base_config(global), corr_src);
      override_if(cbeta_opt, cfg.beta, beta);
      override_if(cod_opt, cfg.od_samples, od_samples);
      override_if(ccseed_opt, cfg.seed, cascade_seed);
      override_if(cexh_opt, cfg.exhaustive, exhaustive);
      const auto g = load_graph(cfg, corr_src);
      const auto loads = mptn::estimate_loads(g, cfg.od_samples, cfg.seed, cfg.exhaustive);
      const auto profile = mptn::recoverability_profile(g, loads, cfg.beta);
      const auto census = mptn::enumerate_ffl(g);
      mptn::NodeMetricVector motif{"motif_score", {census.node_score.begin(), census.node_score.end()}};
      const auto matrix =
          mptn::static_vs_dynamic_report(profile, {mptn::degree_vector(g), mptn::betweenness(g), motif});
      mptn::report::write_correlation(cfg.output_dir / "correlation.csv", matrix);
      mptn::report::write_correlation("/dev/stdout", matrix);
    } else if (optimize->parsed()) {
      const auto opt = mptn::solve_optimal_d(params);
      ordered_json doc{{"d_star", opt.d_star},
                       {"residual", opt.residual},
                       {"concave", opt.boundary ? true : opt.concave},
                       {"curvature", opt.curvature},
                       {"boundary", opt.boundary}};
      if (!sens_param.empty()) {
        auto p = mptn::parse_utility_param(sens_param);
        if (!p) throw mptn::InputError(fmt::format("unknown parameter '{}'", sens_param));
        doc["sensitivity"] = {{"parameter", sens_param},
                              {"delta", sens_delta},
                              {"sign", mptn::sensitivity(params, *p, sens_delta)}};
      }
      print(doc);
    } else if (pareto->parsed()) {
      auto cfg = with_source(base_config(global), pareto_src);
      override_if(pdimt_opt, cfg.pareto_dimt, pareto_dimt);
      override_if(prepeats, cfg.repeats, repeats);
      override_if(pseed, cfg.seed, attack_seed);
      const auto g = load_graph(cfg, pareto_src);
      mptn::ParetoOptions options;
      options.repeats = cfg.repeats;
      options.seed = cfg.seed;
      const auto points = mptn::pareto_sweep(g, cfg.pareto_dimt, options);
      mptn::report::write_pareto(cfg.output_dir / "pareto.csv", points);
      mptn::report::write_pareto("/dev/stdout", points);
    } else if (fit->parsed()) {
      const auto points = mptn::report::read_pareto(pareto_csv);
      const auto f = mptn::fit_utility(points, distance_scale);
      print({{"heuristic", true},
             {"b_max", f.params.b_max},
             {"alpha", f.params.alpha},
             {"beta_risk", f.params.beta_risk},
             {"k", f.params.k},
             {"benefit_sse", f.benefit_sse},
             {"risk_sse", f.risk_sse},
             {"d_star", f.optimum.d_star},
             {"d_star_m", f.optimum.d_star * distance_scale},
             {"boundary", f.optimum.boundary}});
    } else if (stepwise->parsed()) {
      auto cfg = with_source(base_config(global), step_src);
      override_if(sreplicas, cfg.replicas, replicas);
      override_if(sseed, cfg.seed, null_seed);
      const auto rows = mptn::stepwise_integration(cfg);
      mptn::write_stepwise(cfg.output_dir / "stepwise.csv", rows);
      mptn::write_stepwise("/dev/stdout", rows);
    } else if (run_all->parsed()) {
      const auto cfg = with_source(base_config(global), all_src);
      const auto manifest = mptn::run_all(cfg);
      print({{"config_hash", manifest.config_hash},
             {"artifacts", manifest.artifacts.size()},
             {"manifest", (cfg.output_dir / "manifest.json").string()}});
    }
  } catch (const mptn::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const mptn::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
