#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "topo/io.hpp"
#include "topo/metrics.hpp"
#include "topo/pipeline.hpp"

namespace {

// Every knob lives on the top-level app so TOML keys stay flat.
void add_knobs(CLI::App& app, topo::RunConfig& cfg, std::string& backend, double& big_m) {
  auto env = [](CLI::Option* o, const char* name) { o->envname(std::string("TOPO_") + name); };
  auto& red = cfg.pipeline.reduction;
  auto& pl = cfg.pipeline.planner;
  env(app.add_option("-o,--out", cfg.output_dir, "Output directory")->capture_default_str(), "OUT");
  env(app.add_option("--seed", cfg.seed, "Seed for every random choice")->capture_default_str(), "SEED");
  env(app.add_option("--bfs_depth", red.bfs_depth, "BFS-tree depth of the local subgraph")->capture_default_str(),
      "BFS_DEPTH");
  env(app.add_option("--expansion_radius_factor", red.expansion_radius_factor,
                     "Hull expansion as a fraction of the mean edge length")
          ->capture_default_str(),
      "EXPANSION_RADIUS_FACTOR");
  env(app.add_option("--enable_h1", red.enable_h1, "Local subgraph heuristic")->capture_default_str(), "ENABLE_H1");
  env(app.add_option("--enable_h2", red.enable_h2, "Edge insertion heuristic")->capture_default_str(), "ENABLE_H2");
  env(app.add_option("--K", pl.K, "Number of axes")->capture_default_str(), "K");
  env(app.add_option("--s", pl.s, "Sector flexibility margin")->capture_default_str(), "S");
  env(app.add_option("--per_node_s", pl.per_node_s, "Use s_v = ceil((deg v - 1) / 2)")->capture_default_str(),
      "PER_NODE_S");
  env(app.add_option("--l_min", pl.l_min, "Minimum edge length")->capture_default_str(), "L_MIN");
  env(app.add_option("--d_min", pl.d_min, "Minimum edge separation")->capture_default_str(), "D_MIN");
  env(app.add_option("--w_rp", pl.w_rp, "Relative position weight")->capture_default_str(), "W_RP");
  env(app.add_option("--w_or", pl.w_or, "Orthogonality weight")->capture_default_str(), "W_OR");
  env(app.add_option("--w_ev", pl.w_ev, "Length evenness weight")->capture_default_str(), "W_EV");
  env(app.add_option("--big_m", big_m, "Override the big-M constant (0: from the canvas radius)")->capture_default_str(), "BIG_M");
  env(app.add_option("--relative_gap", pl.relative_gap, "Stop a round at this MIP gap")->capture_default_str(),
      "RELATIVE_GAP");
  env(app.add_option("--time_limit", pl.time_limit, "Seconds per planning round")->capture_default_str(),
      "TIME_LIMIT");
  env(app.add_option("--max_rounds", pl.max_rounds, "Planarity rounds")->capture_default_str(), "MAX_ROUNDS");
  env(app.add_option("--backend", backend, "MILP backend")->capture_default_str(), "BACKEND");
  env(app.add_flag("--auto_params", cfg.auto_params, "Derive K and s from the input layout"), "AUTO_PARAMS");
  env(app.add_option("--clusters", cfg.clusters, "Cluster count (0: one per 64 nodes)")->capture_default_str(),
      "CLUSTERS");
  env(app.add_option("--workers", cfg.workers, "Parallel cluster jobs")->capture_default_str(), "WORKERS");
  env(app.add_option("--neighbor_fraction", cfg.neighbor_fraction, "Neighbour fraction M for m_EV")
          ->capture_default_str(),
      "NEIGHBOR_FRACTION");
  env(app.add_option("--baseline_iterations", cfg.baseline_iterations,
                     "Force-directed comparison iterations (metrics)")
          ->capture_default_str(),
      "BASELINE_ITERATIONS");
  env(app.add_option("--node_radius", cfg.render.node_radius, "Marker radius, fraction of the diagonal")
          ->capture_default_str(),
      "NODE_RADIUS");
  env(app.add_option("--svg", cfg.svg, "Write SVG files")->capture_default_str(), "SVG");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topology diagram layout: crossing reduction and K-linear layout planning"};
  app.set_config("--config", "", "TOML file with option values; flags win");
  app.require_subcommand(1);
  app.fallthrough();

  topo::RunConfig cfg;
  std::string backend = cfg.pipeline.backend;
  double big_m = 0.0;
  std::string reference;
  add_knobs(app, cfg, backend, big_m);

  struct Sub {
    const char* name;
    const char* help;
    topo::Stage stage;
  };
  const Sub subs[] = {
      {"full", "Reduce crossings, then plan the layout", topo::Stage::full},
      {"reduce", "Crossing reduction only", topo::Stage::reduce},
      {"plan", "Layout planning on a crossing-reduced input", topo::Stage::plan},
      {"metrics", "Aesthetic metrics of a layout", topo::Stage::metrics},
      {"partition", "Cluster, solve clusters in parallel, reassemble", topo::Stage::partition},
  };
  std::string input;
  for (const Sub& s : subs) {
    CLI::App* sc = app.add_subcommand(s.name, s.help);
    sc->add_option("input", input, "Graph JSON")->required()->check(CLI::ExistingFile);
    if (s.stage == topo::Stage::metrics)
      sc->add_option("--reference", reference, "Reference layout for m_RP (default: the input)");
    sc->callback([&cfg, st = s.stage] { cfg.stage = st; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << nlohmann::json{{"error", {{"kind", "config"}, {"message", e.what()}}}}.dump() << "\n";
    return 2;
  }

  cfg.input = input;
  cfg.pipeline.backend = backend;
  if (big_m > 0) cfg.pipeline.planner.big_m = big_m;
  if (!reference.empty()) cfg.reference = reference;

  topo::RunOutcome out;
  try {
    out = topo::run_pipeline(cfg);
  } catch (const topo::Error& e) {
    std::cerr << topo::error_json(e).dump() << "\n";
    return topo::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << topo::error_json(e).dump() << "\n";
    return 1;
  }

  if (out.report.contains("error")) std::cerr << nlohmann::json{{"error", out.report["error"]}}.dump() << "\n";
  if (cfg.stage == topo::Stage::metrics && out.exit_code == 0) {
    std::ifstream f(cfg.output_dir / "metrics.json");
    const auto mj = nlohmann::json::parse(f);
    for (const auto& [name, m] : mj.items()) std::cout << name << "\n" << topo::MetricsReport::from_json(m).table();
  }
  for (const auto& p : out.artifacts) std::cout << p.string() << "\n";
  return out.exit_code;
}
