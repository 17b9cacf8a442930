#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "support/generators.hpp"
#include "topo/error.hpp"
#include "topo/io.hpp"
#include "topo/pipeline.hpp"
#include "topo/render.hpp"

using namespace topo;
namespace fs = std::filesystem;

namespace {

std::string fixture(const char* name) { return std::string(TOPO_FIXTURE_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::size_t count_class(const std::string& svg, const std::string& cls) {
  const std::regex re("class=\"" + cls + "\"");
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(svg.begin(), svg.end(), re), std::sregex_iterator()));
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("topo_test_" + name);
  fs::remove_all(p);
  return p;
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST(Svg, K5MarksFiveCrossings) {
  const GraphLayout k5 = load_graph_file(fixture("k5.json"));
  const std::string svg = render_svg(k5.graph, k5.layout);
  EXPECT_EQ(count_class(svg, "crossing"), 5u);
  EXPECT_EQ(count_class(svg, "node"), 5u);
  EXPECT_EQ(count_class(svg, "edge"), 10u);
  EXPECT_EQ(svg, render_svg(k5.graph, k5.layout));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
}

TEST(Svg, EmptyGraphIsAValidDocument) {
  const std::string svg = render_svg(PowerGraph{}, Layout{});
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Svg, ViewBoxHasFivePercentMargin) {
  const GraphLayout sq = gen::unit_square();
  const std::string svg = render_svg(sq.graph, sq.layout);
  EXPECT_NE(svg.find("viewBox=\"-0.050000 -1.050000 1.100000 1.100000\""), std::string::npos) << svg;
}

TEST(Svg, TieLineClasses) {
  GraphLayout gl;
  const Point p[] = {{0, 0}, {2, 2}, {0, 2}, {2, 0}};
  for (int i = 0; i < 4; ++i) {
    gl.graph.add_node(gen::nid(i));
    gl.layout.set(gen::nid(i), p[i]);
  }
  gl.graph.add_edge(0, 1);
  gl.graph.add_edge(2, 3);
  RenderOptions o;
  o.tie_line = {0, 1};  // second edge is the tie-line
  const std::string svg = render_svg(gl.graph, gl.layout, o);
  EXPECT_EQ(count_class(svg, "tie-line"), 1u);
  EXPECT_EQ(count_class(svg, "tie-crossing"), 1u);
  EXPECT_EQ(count_class(svg, "crossing"), 0u);
}

TEST(Pipeline, FullOnK5DefaultsAreInfeasible) {
  // one crossing survives; planarized it is the octahedron, whose triangular
  // outer face needs three sectors per corner, so K >= 9
  RunConfig cfg;
  cfg.input = fixture("k5.json");
  cfg.output_dir = scratch("full_default");
  const RunOutcome out = run_pipeline(cfg);
  EXPECT_EQ(out.exit_code, 3);
  EXPECT_EQ(out.report.at("error").at("kind"), "infeasible");
  for (const char* f : {"initial.svg", "reduced.svg", "reduced.json", "report.json"})
    EXPECT_TRUE(fs::exists(cfg.output_dir / f)) << f;
}

TEST(Pipeline, FullOnK5) {
  RunConfig cfg;
  cfg.input = fixture("k5.json");
  cfg.output_dir = scratch("full");
  cfg.stage = Stage::full;
  cfg.pipeline.planner.K = 9;
  cfg.pipeline.planner.s = 3;
  const RunOutcome out = run_pipeline(cfg);
  ASSERT_EQ(out.exit_code, 0) << out.report.dump();
  for (const char* f : {"initial.svg", "reduced.svg", "optimized.svg", "reduced.json", "optimized.json", "metrics.json",
                        "report.json"})
    EXPECT_TRUE(fs::exists(cfg.output_dir / f)) << f;
  const nlohmann::json rep = read_json(cfg.output_dir / "report.json");
  EXPECT_LE(rep.at("optimized_crossings").get<int>(), rep.at("initial_crossings").get<int>());
  const nlohmann::json m = read_json(cfg.output_dir / "metrics.json");
  for (const char* k : {"initial", "reduced", "optimized"}) EXPECT_TRUE(m.contains(k)) << k;
  // artifacts load back
  EXPECT_NO_THROW(load_graph_file(cfg.output_dir / "optimized.json"));
  EXPECT_NO_THROW(load_graph_file(cfg.output_dir / "reduced.json"));
}

TEST(Pipeline, MetricsAgainstItself) {
  RunConfig cfg;
  cfg.input = fixture("ieee30.json");
  cfg.output_dir = scratch("metrics");
  cfg.stage = Stage::metrics;
  const RunOutcome out = run_pipeline(cfg);
  ASSERT_EQ(out.exit_code, 0);
  const nlohmann::json m = read_json(cfg.output_dir / "metrics.json");
  EXPECT_DOUBLE_EQ(m.at("layout").at("rp").get<double>(), 1.0);
}

TEST(Pipeline, ReduceOnPlanarInputIsANoOp) {
  const fs::path dir = scratch("planar");
  fs::create_directories(dir);
  const GraphLayout sq = gen::unit_square();
  write_text_file(dir / "in.json", dump_layout(sq.graph, sq.layout));
  RunConfig cfg;
  cfg.input = dir / "in.json";
  cfg.output_dir = dir / "out";
  cfg.stage = Stage::reduce;
  ASSERT_EQ(run_pipeline(cfg).exit_code, 0);
  const GraphLayout back = load_graph_file(cfg.output_dir / "reduced.json");
  EXPECT_TRUE(back.layout == sq.layout);
}

TEST(Pipeline, ExitCodes) {
  RunConfig cfg;
  cfg.input = fixture("k5.json");
  cfg.output_dir = scratch("codes");
  cfg.pipeline.planner.w_or = -1;
  EXPECT_THROW(run_pipeline(cfg), ConfigError);
  EXPECT_EQ(exit_code_for(ConfigError("x")), 2);
  EXPECT_EQ(exit_code_for(InfeasibleError("x")), 3);
  EXPECT_EQ(exit_code_for(TimeoutError("x")), 3);
  EXPECT_EQ(exit_code_for(ParseError("x")), 1);

  cfg = {};
  cfg.input = "/nonexistent.json";
  cfg.output_dir = scratch("missing");
  const RunOutcome out = run_pipeline(cfg);
  EXPECT_EQ(out.exit_code, 1);
  EXPECT_TRUE(out.report.contains("error"));
  EXPECT_TRUE(fs::exists(cfg.output_dir / "report.json"));
}

TEST(Pipeline, StageNames) {
  for (Stage s : {Stage::full, Stage::reduce, Stage::plan, Stage::metrics, Stage::partition})
    EXPECT_EQ(stage_from_string(to_string(s)), s);
  EXPECT_THROW(stage_from_string("nope"), ConfigError);
}

TEST(Pipeline, PartitionStage) {
  RunConfig cfg;
  cfg.input = fixture("ieee30.json");
  cfg.output_dir = scratch("partition");
  cfg.stage = Stage::partition;
  cfg.clusters = 2;
  cfg.workers = 2;
  const RunOutcome out = run_pipeline(cfg);
  ASSERT_EQ(out.exit_code, 0) << out.report.dump();
  const nlohmann::json plan = read_json(cfg.output_dir / "partition.json");
  EXPECT_EQ(plan.at("k"), 2);
  EXPECT_EQ(plan.at("assignment").size(), 30u);
  EXPECT_TRUE(fs::exists(cfg.output_dir / "optimized.svg"));
}

#ifdef TOPO_CLI_PATH
namespace {

int run_cli(const std::string& args) {
  const int rc = std::system((std::string(TOPO_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Cli, ExitCodesAndConfigFile) {
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  EXPECT_EQ(run_cli("metrics " + fixture("k5.json") + " -o " + (dir / "m").string()), 0);
  EXPECT_EQ(run_cli("metrics " + fixture("k5.json") + " --bogus"), 2);
  EXPECT_EQ(run_cli("plan " + fixture("k5.json") + " --K 1 -o " + (dir / "k").string()), 2);
  EXPECT_EQ(run_cli("reduce /nonexistent.json"), 2);  // rejected by the argument check
  const GraphLayout sq = gen::unit_square();
  write_text_file(dir / "sq.json", dump_layout(sq.graph, sq.layout));
  write_text_file(dir / "cfg.toml", "max_rounds = 1\nrelative_gap = 0.5\n");
  EXPECT_EQ(run_cli("--config " + (dir / "cfg.toml").string() + " plan " + (dir / "sq.json").string() + " -o " +
                    (dir / "p").string()),
            0);
  const nlohmann::json rep = read_json(dir / "p" / "report.json");
  EXPECT_EQ(rep.at("planner").at("max_rounds"), 1);
  EXPECT_DOUBLE_EQ(rep.at("planner").at("relative_gap").get<double>(), 0.5);
}
#endif
