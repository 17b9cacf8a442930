#include "topo/pipeline.hpp"

#include <algorithm>
#include <chrono>

#include <fmt/format.h>

#include "topo/edits.hpp"
#include "topo/io.hpp"
#include "topo/metrics.hpp"

namespace topo {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Writer {
  const RunConfig& cfg;
  RunOutcome& out;

  void text(const std::string& name, const std::string& body) {
    const auto path = cfg.output_dir / name;
    write_text_file(path, body);
    out.artifacts.push_back(path);
  }
  void json(const std::string& name, const nlohmann::json& j) { text(name, j.dump(2) + "\n"); }
  void layout(const std::string& name, const PowerGraph& g, const Layout& l) { text(name, dump_layout(g, l)); }
  void svg(const std::string& name, const PowerGraph& g, const Layout& l, const RenderOptions& opts) {
    if (cfg.svg) text(name, render_svg(g, l, opts));
  }
};

nlohmann::json metrics_or_null(const PowerGraph& g, const Layout& l, const Layout& ref, double frac) {
  if (g.node_count() < 2) return nullptr;
  return compute_metrics(g, l, &ref, frac).to_json();
}

milp::PlannerConfig planner_for(const RunConfig& cfg, const PowerGraph& g, const Layout& l) {
  milp::PlannerConfig p = cfg.pipeline.planner;
  if (cfg.auto_params) {
    const milp::PlannerConfig s = milp::suggest_params(g, l);
    p.K = s.K;
    p.s = s.s;
    p.per_node_s = s.per_node_s;
  }
  return p;
}

nlohmann::json plan_params(const milp::PlannerConfig& p) {
  nlohmann::json j{{"K", p.K},         {"s", p.s},           {"per_node_s", p.per_node_s}, {"l_min", p.l_min},
                   {"d_min", p.d_min}, {"w_rp", p.w_rp},     {"w_or", p.w_or},             {"w_ev", p.w_ev},
                   {"relative_gap", p.relative_gap},         {"time_limit", p.time_limit}, {"max_rounds", p.max_rounds}};
  j["big_m"] = p.big_m ? nlohmann::json(*p.big_m) : nlohmann::json(nullptr);
  return j;
}

// Planarizes and plans; writes optimized artifacts when a layout comes back.
void plan_stage(const RunConfig& cfg, Writer& w, const PowerGraph& g, const Layout& l, const Layout& reference,
                nlohmann::json& report, nlohmann::json& metrics) {
  const auto pos = positions(g, l);
  const geom::CrossingReport rep = geom::sweep_intersections(edge_segments(g, pos));
  const GraphLayout planar = planarize_with_dummies(g, l, rep);
  const milp::PlannerConfig pc = planner_for(cfg, planar.graph, planar.layout);
  report["planner"] = plan_params(pc);
  report["dummies"] = rep.size();
  auto backend = milp::make_backend(cfg.pipeline.backend);
  const auto t = Clock::now();
  const milp::PlanResult plan = milp::plan_by_component(planar.graph, planar.layout, pc, *backend);
  report["plan"] = plan.log_json();
  report["plan_seconds"] = since(t);
  w.layout("optimized.json", planar.graph, plan.layout);
  w.svg("optimized.svg", planar.graph, plan.layout, cfg.render);
  metrics["optimized"] = metrics_or_null(planar.graph, plan.layout, reference, cfg.neighbor_fraction);
  report["optimized_crossings"] = count_crossings(planar.graph, plan.layout) + rep.size();
  if (!plan.planar)
    throw InfeasibleError(fmt::format("layout still has intersecting edges after {} rounds", plan.rounds.size()));
}

}  // namespace

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::full: return "full";
    case Stage::reduce: return "reduce";
    case Stage::plan: return "plan";
    case Stage::metrics: return "metrics";
    case Stage::partition: return "partition";
  }
  return "?";
}

Stage stage_from_string(std::string_view s) {
  for (Stage st : {Stage::full, Stage::reduce, Stage::plan, Stage::metrics, Stage::partition})
    if (to_string(st) == s) return st;
  throw ConfigError("unknown stage '" + std::string(s) + "'");
}

void RunConfig::validate() const {
  if (input.empty()) throw ConfigError("an input file is required");
  pipeline.reduction.validate();
  pipeline.planner.validate();
  milp::make_backend(pipeline.backend);
  if (clusters < 0) throw ConfigError("clusters must be >= 0");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (!(neighbor_fraction > 0 && neighbor_fraction <= 1)) throw ConfigError("neighbor_fraction must be in (0, 1]");
  if (baseline_iterations < 0) throw ConfigError("baseline_iterations must be >= 0");
  if (!(render.width > 0) || !(render.node_radius > 0) || render.margin < 0)
    throw ConfigError("render options must be positive");
}

int exit_code_for(const Error& e) {
  const std::string_view k = e.kind();
  if (k == "config") return 2;
  if (k == "infeasible" || k == "timeout") return 3;
  return 1;
}

nlohmann::json error_json(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  return {{"error", {{"kind", err ? err->kind() : "error"}, {"message", e.what()}}}};
}

RunOutcome run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  RunOutcome out;
  Writer w{cfg, out};
  nlohmann::json& report = out.report;
  nlohmann::json metrics = nlohmann::json::object();
  report["stage"] = to_string(cfg.stage);
  report["input"] = cfg.input.string();
  report["seed"] = cfg.seed;
  const auto start = Clock::now();
  try {
    std::filesystem::create_directories(cfg.output_dir);
    const GraphLayout in = load_graph_file(cfg.input);
    const PowerGraph& g = in.graph;
    const Layout& l0 = in.layout;
    report["nodes"] = g.node_count();
    report["edges"] = g.edge_count();
    report["initial_crossings"] = count_crossings(g, l0);

    switch (cfg.stage) {
      case Stage::metrics: {
        Layout ref = l0;
        if (cfg.reference) {
          const GraphLayout r = load_graph_file(*cfg.reference);
          ref = r.layout;
        }
        metrics["layout"] = compute_metrics(g, l0, &ref, cfg.neighbor_fraction).to_json();
        if (cfg.baseline_iterations > 0) {
          const Layout fd = force_directed_baseline(g, cfg.seed, cfg.baseline_iterations);
          metrics["force_directed"] = compute_metrics(g, fd, &ref, cfg.neighbor_fraction).to_json();
        }
        break;
      }
      case Stage::reduce:
      case Stage::full: {
        w.svg("initial.svg", g, l0, cfg.render);
        metrics["initial"] = metrics_or_null(g, l0, l0, cfg.neighbor_fraction);
        const ReductionResult r = reduce_crossings(g, l0, cfg.pipeline.reduction);
        report["reduction"] = r.report.to_json();
        report["reduced_crossings"] = r.report.final_crossings;
        w.layout("reduced.json", r.graph, r.layout);
        w.svg("reduced.svg", r.graph, r.layout, cfg.render);
        metrics["reduced"] = metrics_or_null(r.graph, r.layout, l0, cfg.neighbor_fraction);
        if (cfg.stage == Stage::full) plan_stage(cfg, w, r.graph, r.layout, l0, report, metrics);
        break;
      }
      case Stage::plan: {
        w.svg("initial.svg", g, l0, cfg.render);
        metrics["initial"] = metrics_or_null(g, l0, l0, cfg.neighbor_fraction);
        plan_stage(cfg, w, g, l0, l0, report, metrics);
        break;
      }
      case Stage::partition: {
        w.svg("initial.svg", g, l0, cfg.render);
        metrics["initial"] = metrics_or_null(g, l0, l0, cfg.neighbor_fraction);
        const int k = cfg.clusters > 0 ? cfg.clusters : default_cluster_count(g.node_count());
        const PartitionPlan plan = partition_kmeans(g, l0, k, cfg.seed);
        w.json("partition.json", plan.to_json(g));
        PipelineConfig pc = cfg.pipeline;
        const auto t = Clock::now();
        const std::vector<ClusterOutcome> res = solve_partitions_parallel(plan, pc, cfg.workers);
        report["solve_seconds"] = since(t);
        nlohmann::json clusters = nlohmann::json::array();
        for (std::size_t c = 0; c < res.size(); ++c) {
          nlohmann::json rounds = nlohmann::json::array();
          for (const milp::RoundLog& r : res[c].rounds) rounds.push_back({{"round", r.round}, {"status", r.status}, {"new_pairs", r.new_pairs}});
          clusters.push_back({{"cluster", c},
                              {"nodes", plan.submodels[c].nodes.size()},
                              {"optimized", res[c].optimized},
                              {"reduced_crossings", res[c].reduced_crossings},
                              {"error", res[c].error},
                              {"rounds", std::move(rounds)}});
        }
        report["clusters"] = std::move(clusters);
        const Assembly a = assemble_layout(g, l0, plan, res);
        report["tie_lines"] = plan.tie_lines.size();
        report["assembled_crossings"] = a.crossings.size() + static_cast<std::size_t>(std::count_if(
                                            a.graph.nodes().begin(), a.graph.nodes().end(),
                                            [](const Node& n) { return n.kind == NodeKind::dummy; }));
        report["internal_crossings"] = a.internal_crossings;
        report["tie_line_crossings"] = a.tie_line_crossings;
        report["warnings"] = a.warnings;
        w.layout("optimized.json", a.graph, a.layout);
        RenderOptions ro = cfg.render;
        ro.tie_line = a.tie_line;
        w.svg("optimized.svg", a.graph, a.layout, ro);
        metrics["optimized"] = metrics_or_null(a.graph, a.layout, l0, cfg.neighbor_fraction);
        break;
      }
    }
  } catch (const Error& e) {
    out.exit_code = exit_code_for(e);
    report.update(error_json(e));
  } catch (const std::exception& e) {
    out.exit_code = 1;
    report.update(error_json(e));
  }
  report["seconds"] = since(start);
  report["exit_code"] = out.exit_code;
  try {
    std::filesystem::create_directories(cfg.output_dir);
    if (!metrics.empty()) w.json("metrics.json", metrics);
    w.json("report.json", report);
  } catch (const std::exception& e) {
    if (out.exit_code == 0) out.exit_code = 1;
    report.update(error_json(e));
  }
  return out;
}

}  // namespace topo
