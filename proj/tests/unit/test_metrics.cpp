#include <gtest/gtest.h>

#include <fstream>

#include "support/generators.hpp"
#include "topo/edits.hpp"
#include "topo/error.hpp"
#include "topo/io.hpp"
#include "topo/metrics.hpp"

using namespace topo;

namespace {

GraphLayout build(const std::vector<Point>& pts, const std::vector<std::pair<int, int>>& edges) {
  GraphLayout gl;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    gl.graph.add_node(gen::nid(i));
    gl.layout.set(gen::nid(i), pts[i]);
  }
  for (auto [a, b] : edges) gl.graph.add_edge(a, b);
  return gl;
}

std::string fixture(const char* name) { return std::string(TOPO_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST(Metrics, UnitSquareIsPerfect) {
  const GraphLayout sq = gen::unit_square();
  const MetricsReport m = compute_metrics(sq.graph, sq.layout, &sq.layout);
  EXPECT_EQ(m.ex, 0);
  EXPECT_NEAR(m.el, 1.0, 1e-12);
  EXPECT_NEAR(m.nd, 1.0, 1e-12);
  EXPECT_NEAR(m.ia, 1.0, 1e-12);
  EXPECT_NEAR(*m.rp, 1.0, 1e-12);
  EXPECT_NEAR(m.orth, 1.0, 1e-12);
  EXPECT_NEAR(m.ev, 0.0, 1e-12);  // every nearest distance is 1
}

TEST(Metrics, EdgeLengthAndNodeDistanceRatios) {
  // path 0-1-2, lengths 1 and 3
  const GraphLayout p = build({{0, 0}, {1, 0}, {4, 0}}, {{0, 1}, {1, 2}});
  const MetricsReport m = compute_metrics(p.graph, p.layout);
  EXPECT_NEAR(m.el, 1.0 / 2.0, 1e-12);
  // nearest neighbour distances 1, 1, 3
  EXPECT_NEAR(m.nd, 1.0 / (5.0 / 3.0), 1e-12);
  EXPECT_FALSE(m.rp.has_value());
}

TEST(Metrics, AngularResolution) {
  // centre with neighbours at 0, 90, 180 degrees: 90 / 120 at the centre, leaves 1
  const GraphLayout s = build({{0, 0}, {1, 0}, {0, 1}, {-1, 0}}, {{0, 1}, {0, 2}, {0, 3}});
  const MetricsReport m = compute_metrics(s.graph, s.layout);
  const double centre = 90.0 / 120.0;
  EXPECT_NEAR(m.ia, centre / ((centre + 3.0) / 4.0), 1e-12);
}

TEST(Metrics, Orthogonality) {
  const GraphLayout diag = build({{0, 0}, {1, 1}}, {{0, 1}});
  EXPECT_NEAR(compute_metrics(diag.graph, diag.layout).orth, 0.0, 1e-12);
  const double t = 22.5 * std::numbers::pi / 180.0;
  const GraphLayout half = build({{0, 0}, {std::cos(t), std::sin(t)}}, {{0, 1}});
  EXPECT_NEAR(compute_metrics(half.graph, half.layout).orth, 0.5, 1e-12);
  const GraphLayout steep = build({{0, 0}, {-std::sin(t), -std::cos(t)}}, {{0, 1}});
  EXPECT_NEAR(compute_metrics(steep.graph, steep.layout).orth, 0.5, 1e-12);
}

TEST(Metrics, RelativePosition) {
  const GraphLayout sq = gen::unit_square();
  Layout flipped;
  for (const Node& n : sq.graph.nodes()) flipped.set(n.id, sq.layout.at(n.id) * -1.0);
  EXPECT_NEAR(*compute_metrics(sq.graph, flipped, &sq.layout).rp, 0.0, 1e-12);
  Layout turned;  // quarter turn
  for (const Node& n : sq.graph.nodes()) {
    const Point p = sq.layout.at(n.id);
    turned.set(n.id, {-p.y, p.x});
  }
  EXPECT_NEAR(*compute_metrics(sq.graph, turned, &sq.layout).rp, 0.5, 1e-12);
}

TEST(Metrics, RelativePositionSkipsEdgesOutsideTheReference) {
  const GraphLayout sq = gen::unit_square();
  const InflectionResult r = add_inflection_node(sq.graph, sq.layout, gen::nid(0), gen::nid(1));
  EXPECT_NEAR(*compute_metrics(r.graph, r.layout, &sq.layout).rp, 1.0, 1e-12);
}

TEST(Metrics, EvennessByHand) {
  // nodes at 0, 1, 3; M = 1: nearest 1, 1, 2 -> normalized 0, 0, 1
  const GraphLayout p = build({{0, 0}, {1, 0}, {3, 0}}, {{0, 1}, {1, 2}});
  EXPECT_NEAR(compute_metrics(p.graph, p.layout).ev, -2.0 / 9.0, 1e-12);
}

TEST(Metrics, CrossingsIncludeDummies) {
  const GraphLayout k5 = gen::k5();
  EXPECT_EQ(compute_metrics(k5.graph, k5.layout).ex, -5);
  const auto rep = geom::sweep_intersections(edge_segments(k5.graph, positions(k5.graph, k5.layout)));
  const GraphLayout planar = planarize_with_dummies(k5.graph, k5.layout, rep);
  EXPECT_EQ(compute_metrics(planar.graph, planar.layout).ex, -5);
}

TEST(Metrics, CountCrossingsBothPaths) {
  std::mt19937_64 rng(31);
  const auto segs = gen::random_segments(rng, 80);
  EXPECT_EQ(count_crossings(segs), count_crossings(segs, true));
}

TEST(Metrics, Preconditions) {
  PowerGraph g;
  g.add_node(NodeId("a"));
  Layout l;
  l.set(NodeId("a"), {0, 0});
  EXPECT_THROW(compute_metrics(g, l), ValidationError);
  const GraphLayout sq = gen::unit_square();
  EXPECT_THROW(compute_metrics(sq.graph, sq.layout, nullptr, 0.0), ValidationError);
}

TEST(Metrics, JsonAndTable) {
  const GraphLayout sq = gen::unit_square();
  const MetricsReport m = compute_metrics(sq.graph, sq.layout, &sq.layout);
  const MetricsReport back = MetricsReport::from_json(m.to_json());
  EXPECT_EQ(back.ex, m.ex);
  EXPECT_EQ(back.rp, m.rp);
  EXPECT_EQ(back.ev, m.ev);
  const std::string t = m.table();
  for (const char* k : {"m_EX", "m_EL", "m_ND", "m_IA", "m_RP", "m_OR", "m_EV"})
    EXPECT_NE(t.find(k), std::string::npos) << k;
  EXPECT_TRUE(compute_metrics(sq.graph, sq.layout).to_json().at("rp").is_null());
}

TEST(Metrics, Ieee118Regression) {
  const GraphLayout gl = load_graph_file(fixture("ieee118.json"));
  std::ifstream f(fixture("ieee118_metrics.json"));
  const nlohmann::json want = nlohmann::json::parse(f);
  const nlohmann::json got = compute_metrics(gl.graph, gl.layout, &gl.layout).to_json();
  EXPECT_EQ(got.at("ex"), want.at("ex"));
  for (const char* k : {"el", "nd", "ia", "rp", "or", "ev"})
    EXPECT_NEAR(got.at(k).get<double>(), want.at(k).get<double>(), 1e-12) << k;
  EXPECT_EQ(want.at("ex"), -66);
}

TEST(ForceDirected, DeterministicPerSeed) {
  const GraphLayout k5 = gen::k5();
  const Layout a = force_directed_baseline(k5.graph, 42, 100);
  const Layout b = force_directed_baseline(k5.graph, 42, 100);
  const Layout c = force_directed_baseline(k5.graph, 43, 100);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
  EXPECT_NO_THROW(check_distinct_points(k5.graph, positions(k5.graph, a)));
  EXPECT_THROW(force_directed_baseline(k5.graph, 42, 0), ValidationError);
}
