#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "topo/edits.hpp"
#include "topo/error.hpp"
#include "topo/io.hpp"
#include "topo/metrics.hpp"

using namespace topo;

TEST(Graph, ParallelLinesMergeIntoMultiplicity) {
  PowerGraph g;
  g.add_node(NodeId("a"));
  g.add_node(NodeId("b"));
  EXPECT_EQ(g.add_edge(0, 1), 0u);
  EXPECT_EQ(g.add_edge(1, 0), 0u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.edge(0).count, 2);
  EXPECT_EQ(g.degree(0), 1u);
}

TEST(Graph, SelfLoopAndUnknownIdsRejected) {
  PowerGraph g;
  g.add_node(NodeId("a"));
  EXPECT_THROW(g.add_edge(0, 0), ValidationError);
  EXPECT_THROW(g.add_edge(NodeId("a"), NodeId("zz")), NotFoundError);
  EXPECT_THROW(g.add_node(NodeId("a")), ValidationError);
}

TEST(Graph, RemoveEdgeShiftsIndices) {
  PowerGraph g;
  for (int i = 0; i < 4; ++i) g.add_node(gen::nid(i));
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.remove_edge(0);
  ASSERT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.edge(0).a, 1u);
  EXPECT_FALSE(g.find_edge(0, 1));
  EXPECT_EQ(*g.find_edge(3, 2), 1u);
  EXPECT_EQ(g.degree(0), 0u);
  g.remove_isolated_node(0);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.index_of(gen::nid(3)), 2u);
  EXPECT_NO_THROW(g.validate());
}

TEST(Graph, ReservedIdsAreFresh) {
  PowerGraph g;
  g.add_node(NodeId("__dummy_0"), NodeKind::dummy);
  g.add_node(NodeId("__dummy_3"), NodeKind::dummy);
  const NodeId id = next_reserved_id(g, kDummyPrefix);
  EXPECT_FALSE(g.find_node(id));
  EXPECT_EQ(id.str().rfind("__dummy_", 0), 0u);
}

TEST(Io, LoadsNodesEdgesAndLabels) {
  const GraphLayout gl = load_graph_text(R"({"nodes":[{"id":"1","x":0,"y":0,"label":"Bus 1"},
    {"id":2,"x":1.5,"y":-2}],"edges":[{"a":"1","b":"2","count":2}]})");
  EXPECT_EQ(gl.graph.node_count(), 2u);
  EXPECT_EQ(gl.graph.node(0).label, "Bus 1");
  EXPECT_EQ(gl.graph.edge(0).count, 2);
  EXPECT_EQ(gl.layout.at(NodeId("2")), (Point{1.5, -2}));
}

TEST(Io, ErrorsCarryKinds) {
  EXPECT_THROW(load_graph_text("{\"nodes\": [\n{\"id\": \"a\", }"), ParseError);
  EXPECT_THROW(load_graph_text(R"({"edges":[]})"), ValidationError);
  EXPECT_THROW(load_graph_text(R"({"nodes":[{"id":"a","x":0}]})"), ValidationError);
  EXPECT_THROW(load_graph_text(R"({"nodes":[{"id":"a","x":0,"y":0},{"id":"a","x":1,"y":0}]})"), ValidationError);
  EXPECT_THROW(load_graph_text(R"({"nodes":[{"id":"a","x":0,"y":0}],"edges":[{"a":"a","b":"q"}]})"),
               ValidationError);
  EXPECT_THROW(load_graph_text(R"({"nodes":[{"id":"__dummy_1","x":0,"y":0}]})"), ValidationError);
  EXPECT_THROW(load_graph_text(R"({"nodes":[{"id":"a","x":0,"y":0},{"id":"b","x":0,"y":0}],
    "edges":[{"a":"a","b":"b","count":0}]})"),
               ValidationError);
  EXPECT_THROW(load_graph_file("/nonexistent/graph.json"), Error);
}

TEST(Io, ParseErrorNamesLine) {
  try {
    load_graph_text("{\n\"nodes\": [\n  {\"id\": \"a\" \"x\": 1}\n]}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Io, DumpRoundTripsWithAuxiliaryNodes) {
  const GraphLayout k5 = gen::k5();
  const auto rep = geom::sweep_intersections(edge_segments(k5.graph, positions(k5.graph, k5.layout)));
  const GraphLayout planar = planarize_with_dummies(k5.graph, k5.layout, rep);
  const GraphLayout back = load_graph_text(dump_layout(planar.graph, planar.layout));
  EXPECT_TRUE(back.graph == planar.graph);
  EXPECT_TRUE(back.layout == planar.layout);
}

TEST(Edits, PlanarizeK5) {
  const GraphLayout k5 = gen::k5();
  const auto rep = geom::sweep_intersections(edge_segments(k5.graph, positions(k5.graph, k5.layout)));
  ASSERT_EQ(rep.size(), 5u);
  const GraphLayout planar = planarize_with_dummies(k5.graph, k5.layout, rep);
  EXPECT_EQ(planar.graph.node_count(), 10u);
  // each diagonal is cut twice, into three pieces
  EXPECT_EQ(planar.graph.edge_count(), 5u + 5u * 3u);
  EXPECT_EQ(count_crossings(planar.graph, planar.layout), 0u);
  for (std::size_t v = 5; v < 10; ++v) {
    EXPECT_EQ(planar.graph.node(v).kind, NodeKind::dummy);
    EXPECT_EQ(planar.graph.degree(v), 4u);
  }
}

TEST(Edits, InflectionIsInvertible) {
  const GraphLayout sq = gen::unit_square();
  const InflectionResult r = add_inflection_node(sq.graph, sq.layout, gen::nid(0), gen::nid(1));
  EXPECT_EQ(r.graph.node_count(), 5u);
  EXPECT_EQ(r.layout.at(r.node), (Point{0.5, 0}));
  EXPECT_EQ(r.graph.degree(r.graph.index_of(r.node)), 2u);
  const GraphLayout back = remove_inflection_node(r.graph, r.layout, r.node);
  EXPECT_TRUE(back.graph == sq.graph);
  EXPECT_TRUE(back.layout == sq.layout);
  EXPECT_THROW(add_inflection_node(sq.graph, sq.layout, gen::nid(0), gen::nid(2)), Error);
}

TEST(Layout, PositionsRequireEveryNode) {
  const GraphLayout sq = gen::unit_square();
  Layout partial = sq.layout;
  partial.erase(gen::nid(2));
  EXPECT_THROW(positions(sq.graph, partial), ValidationError);
  std::vector<Point> dup = positions(sq.graph, sq.layout);
  dup[3] = dup[0];
  EXPECT_THROW(check_distinct_points(sq.graph, dup), ValidationError);
}
