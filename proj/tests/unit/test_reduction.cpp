#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "topo/error.hpp"
#include "topo/metrics.hpp"
#include "topo/reduction.hpp"

using namespace topo;

namespace {

std::size_t crossings(const PowerGraph& g, const std::vector<Point>& pos) {
  return geom::brute_force_intersections(edge_segments(g, pos)).size();
}

}  // namespace

TEST(OptimalMove, LeavesTheShadow) {
  // v=0 sits above edge (2,3) as seen from its neighbour 1
  PowerGraph g;
  for (int i = 0; i < 4; ++i) g.add_node(gen::nid(i));
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  const std::vector<Point> pos{{0, 3}, {0, -1}, {-1, 2}, {1, 2}};
  ASSERT_EQ(crossings(g, pos), 1u);
  ReductionConfig cfg;
  cfg.enable_h1 = false;
  const NodeMove mv = optimal_move(g, pos, 0, cfg);
  EXPECT_TRUE(mv.moved);
  EXPECT_EQ(mv.delta, -1);
  std::vector<Point> after = pos;
  after[0] = mv.position;
  EXPECT_EQ(crossings(g, after), 0u);
}

TEST(OptimalMove, StaysWhenAlreadyOptimal) {
  const GraphLayout sq = gen::unit_square();
  const std::vector<Point> pos = positions(sq.graph, sq.layout);
  const NodeMove mv = optimal_move(sq.graph, pos, 0, ReductionConfig{});
  EXPECT_FALSE(mv.moved);
  EXPECT_EQ(mv.delta, 0);
  EXPECT_EQ(mv.position, pos[0]);
}

TEST(OptimalMove, PredictionMatchesRecountOnRandomGraphs) {
  std::mt19937_64 rng(21);
  for (int gi = 0; gi < 10; ++gi) {
    const GraphLayout gl = gen::random_graph(rng, 8, 14);
    std::vector<Point> pos = positions(gl.graph, gl.layout);
    ReductionConfig cfg;
    cfg.enable_h1 = false;
    for (std::size_t v = 0; v < 8; ++v) {
      const long before = static_cast<long>(crossings(gl.graph, pos));
      const NodeMove mv = optimal_move(gl.graph, pos, v, cfg);
      EXPECT_LE(mv.delta, 0);
      pos[v] = mv.position;
      EXPECT_EQ(static_cast<long>(crossings(gl.graph, pos)), before + mv.delta) << "graph " << gi << " node " << v;
    }
  }
}

TEST(MoveRegion, WithoutH1CoversTheWholeDrawing) {
  std::mt19937_64 rng(22);
  const GraphLayout gl = gen::random_graph(rng, 9, 15);
  const std::vector<Point> pos = positions(gl.graph, gl.layout);
  ReductionConfig cfg;
  cfg.enable_h1 = false;
  const MoveRegion r = move_region(gl.graph, pos, 0, cfg);
  for (const Point& p : pos) EXPECT_TRUE(geom::contains(r.canvas, p));
  for (char c : r.edges) EXPECT_EQ(c, 1);
}

TEST(MoveRegion, H1RestrictsToTheBfsNeighbourhood) {
  // path 0-1-2-...-9; depth 2 around node 0 sees edges (0,1),(1,2)
  PowerGraph g;
  std::vector<Point> pos;
  for (int i = 0; i < 10; ++i) {
    g.add_node(gen::nid(i));
    pos.push_back({static_cast<double>(i), (i % 2) * 0.3});
  }
  for (int i = 0; i + 1 < 10; ++i) g.add_edge(i, i + 1);
  ReductionConfig cfg;
  cfg.bfs_depth = 2;
  const MoveRegion r = move_region(g, pos, 0, cfg);
  EXPECT_EQ(r.edges[0], 1);
  EXPECT_EQ(r.edges[1], 1);
  EXPECT_EQ(r.edges[8], 0);
  EXPECT_FALSE(geom::contains(r.canvas, pos[9]));
}

TEST(Reduce, K5ReachesAtMostTwo) {
  const GraphLayout k5 = gen::k5();
  const ReductionResult r = reduce_crossings(k5.graph, k5.layout, ReductionConfig{});
  EXPECT_EQ(r.report.initial_crossings, 5u);
  EXPECT_LE(r.report.final_crossings, 2u);
  EXPECT_GE(r.report.final_crossings, 1u);  // K5 is not planar
  EXPECT_EQ(count_crossings(r.graph, r.layout), r.report.final_crossings);
  EXPECT_EQ(r.graph.edge_count() - r.report.inflections_added, 10u);
}

TEST(Reduce, PlanarInputIsUntouched) {
  const GraphLayout sq = gen::unit_square();
  const ReductionResult r = reduce_crossings(sq.graph, sq.layout, ReductionConfig{});
  EXPECT_TRUE(r.layout == sq.layout);
  EXPECT_TRUE(r.graph == sq.graph);
  EXPECT_EQ(r.report.final_crossings, 0u);
  EXPECT_TRUE(r.report.moves.empty());
}

TEST(Reduce, StepsNeverRaiseTheTotal) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 10; ++i) {
    const GraphLayout gl = gen::random_graph(rng, 14, 22);
    const ReductionResult r = reduce_crossings(gl.graph, gl.layout, ReductionConfig{});
    std::size_t prev = r.report.initial_crossings;
    for (const StepRecord& s : r.report.steps) {
      EXPECT_LE(s.total, prev);
      prev = s.total;
    }
    EXPECT_EQ(count_crossings(r.graph, r.layout), r.report.final_crossings);
  }
}

TEST(Reduce, Deterministic) {
  std::mt19937_64 rng(24);
  const GraphLayout gl = gen::random_graph(rng, 16, 26);
  const ReductionResult a = reduce_crossings(gl.graph, gl.layout, ReductionConfig{});
  const ReductionResult b = reduce_crossings(gl.graph, gl.layout, ReductionConfig{});
  EXPECT_TRUE(a.layout == b.layout);
  EXPECT_TRUE(a.graph == b.graph);
}

TEST(Reduce, ReportJson) {
  const GraphLayout k5 = gen::k5();
  const ReductionResult r = reduce_crossings(k5.graph, k5.layout, ReductionConfig{});
  const nlohmann::json j = r.report.to_json();
  EXPECT_EQ(j.at("initial_crossings"), 5);
  EXPECT_TRUE(j.contains("steps"));
  EXPECT_TRUE(j.contains("moves"));
}

TEST(Reduce, ConfigValidation) {
  ReductionConfig cfg;
  cfg.bfs_depth = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.expansion_radius_factor = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(InsertEdge, NeverWorseThanStraight) {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 15; ++i) {
    const GraphLayout gl = gen::random_graph(rng, 10, 16);
    // drop one edge and put it back
    PowerGraph without = gl.graph;
    const Edge e = without.edge(0);
    without.remove_edge(0);
    const NodeId a = gl.graph.node(e.a).id, b = gl.graph.node(e.b).id;
    const InsertOutcome out = insert_edge_h2(without, gl.layout, a, b, ReductionConfig{});
    EXPECT_LE(out.crossings, out.straight_crossings);
    EXPECT_EQ(count_crossings(out.graph, out.layout), out.crossings);
    if (out.variant == InsertVariant::inflection) {
      EXPECT_EQ(out.graph.node_count(), gl.graph.node_count() + 1);
    } else {
      EXPECT_TRUE(out.graph.find_edge(out.graph.index_of(a), out.graph.index_of(b)));
    }
  }
}
