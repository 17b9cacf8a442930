// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include <fmt/format.h>

#include "support/checks.hpp"
#include "support/generators.hpp"
#include "topo/edits.hpp"
#include "topo/error.hpp"
#include "topo/geometry/sweep.hpp"
#include "topo/io.hpp"
#include "topo/metrics.hpp"
#include "topo/milp/planner.hpp"
#include "topo/partition.hpp"
#include "topo/reduction.hpp"

using namespace topo;
using Clock = std::chrono::steady_clock;

namespace {

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fixture(const char* name) { return std::string(TOPO_FIXTURE_DIR) + "/" + name; }

// Independent crossing oracle: long double orientation, proper crossings only.
int orient_ld(const Point& a, const Point& b, const Point& c) {
  const long double v = static_cast<long double>(b.x - a.x) * (c.y - a.y) -
                        static_cast<long double>(b.y - a.y) * (c.x - a.x);
  return (v > 0) - (v < 0);
}

bool proper_cross(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int o1 = orient_ld(a, b, c), o2 = orient_ld(a, b, d), o3 = orient_ld(c, d, a), o4 = orient_ld(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

long oracle_crossings(const PowerGraph& g, const std::vector<Point>& pos) {
  long n = 0;
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    for (std::size_t f = e + 1; f < g.edge_count(); ++f) {
      const Edge& a = g.edge(e);
      const Edge& b = g.edge(f);
      if (a.touches(b.a) || a.touches(b.b)) continue;
      n += proper_cross(pos[a.a], pos[a.b], pos[b.a], pos[b.b]) ? 1 : 0;
    }
  return n;
}

// Crossings between v's edges and the rest, with v drawn at p.
long crossings_at(const PowerGraph& g, const std::vector<Point>& pos, std::size_t v, const Point& p) {
  long n = 0;
  for (std::size_t e : g.incident_edges(v)) {
    const std::size_t u = g.edge(e).other(v);
    for (const Edge& f : g.edges()) {
      if (f.touches(v) || f.touches(u)) continue;
      n += proper_cross(p, pos[u], pos[f.a], pos[f.b]) ? 1 : 0;
    }
  }
  return n;
}

Verdict criterion1() {
  std::mt19937_64 rng(1);
  const auto t = Clock::now();
  int mismatches = 0;
  std::size_t pairs = 0;
  for (int i = 0; i < 200; ++i) {
    const auto segs = gen::random_segments(rng, 50);
    const auto a = geom::sweep_intersections(segs);
    const auto b = geom::brute_force_intersections(segs);
    pairs += b.size();
    bool same = a.size() == b.size();
    for (std::size_t k = 0; same && k < a.size(); ++k) same = a.pairs[k].a == b.pairs[k].a && a.pairs[k].b == b.pairs[k].b;
    mismatches += same ? 0 : 1;
  }
  const double secs = since(t);
  return {mismatches == 0 && secs < 10.0,
          fmt::format("200 instances x 50 segments, {} pairs, {} mismatching instances, {:.3f} s (limit 10 s)", pairs,
                      mismatches, secs)};
}

Verdict criterion2() {
  const GraphLayout k5 = load_graph_file(fixture("k5.json"));
  const std::size_t c0 = count_crossings(k5.graph, k5.layout);
  const ReductionResult r = reduce_crossings(k5.graph, k5.layout, ReductionConfig{});
  const std::size_t c1 = count_crossings(r.graph, r.layout);
  return {c0 == 5 && c1 <= 2 && c1 == r.report.final_crossings,
          fmt::format("initial {} (expect 5), final {} (limit 2, graph-theoretic minimum 1)", c0, c1)};
}

Verdict criterion3() {
  std::mt19937_64 rng(3);
  ReductionConfig cfg;
  cfg.enable_h1 = false;
  std::size_t moves = 0, recount_bad = 0, oracle_bad = 0, samples = 0;
  std::uniform_int_distribution<std::size_t> nodes(4, 10);
  for (int gi = 0; gi < 30; ++gi) {
    const std::size_t n = nodes(rng);
    std::uniform_int_distribution<std::size_t> edges(n, std::min<std::size_t>(n * (n - 1) / 2, 2 * n));
    const GraphLayout gl = gen::random_graph(rng, n, edges(rng));
    std::vector<Point> pos = positions(gl.graph, gl.layout);
    for (std::size_t v = 0; v < n; ++v) {
      if (gl.graph.degree(v) == 0) continue;
      const long before_v = crossings_at(gl.graph, pos, v, pos[v]);
      const long before = oracle_crossings(gl.graph, pos);
      const NodeMove mv = optimal_move(gl.graph, pos, v, cfg);
      // grid oracle over the move canvas
      const geom::ConvexPolygon canvas = move_region(gl.graph, pos, v, cfg).canvas;
      double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
      for (const Point& c : canvas) {
        x0 = std::min(x0, c.x), x1 = std::max(x1, c.x), y0 = std::min(y0, c.y), y1 = std::max(y1, c.y);
      }
      long best = 0;  // staying put is a candidate
      for (int i = 0; i < 100; ++i)
        for (int j = 0; j < 100; ++j) {
          const Point p{x0 + (x1 - x0) * (i + 0.5) / 100, y0 + (y1 - y0) * (j + 0.5) / 100};
          if (!geom::contains(canvas, p)) continue;
          ++samples;
          best = std::min(best, crossings_at(gl.graph, pos, v, p) - before_v);
        }
      if (mv.delta > best) ++oracle_bad;
      if (mv.moved) pos[v] = mv.position;
      if (oracle_crossings(gl.graph, pos) != before + mv.delta) ++recount_bad;
      ++moves;
    }
  }
  return {recount_bad == 0 && oracle_bad == 0,
          fmt::format("{} optimal moves on 30 graphs; recount != before+delta: {}; delta above grid optimum: {} "
                      "({} grid samples)",
                      moves, recount_bad, oracle_bad, samples)};
}

Verdict criterion4() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> nodes(8, 24);
  std::size_t steps = 0, increases = 0, final_bad = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = nodes(rng);
    const GraphLayout gl = gen::random_graph(rng, n, n + n / 2);
    ReductionConfig cfg;
    cfg.enable_h2 = i % 2 == 0;
    cfg.enable_h1 = i % 3 != 0;
    const ReductionResult r = reduce_crossings(gl.graph, gl.layout, cfg);
    std::size_t prev = r.report.initial_crossings;
    for (const StepRecord& s : r.report.steps) {
      ++steps;
      if (s.total > prev) ++increases;
      prev = s.total;
    }
    if (oracle_crossings(r.graph, positions(r.graph, r.layout)) != static_cast<long>(r.report.final_crossings) ||
        r.report.final_crossings > r.report.initial_crossings)
      ++final_bad;
  }
  return {increases == 0 && final_bad == 0,
          fmt::format("50 reductions, {} accepted steps, {} increases, {} final-count mismatches", steps, increases,
                      final_bad)};
}

Verdict criterion5() {
  GraphLayout c4;
  const Point p[] = {{0, 0}, {1.1, 0.1}, {1, 1}, {-0.1, 0.9}};
  for (std::size_t i = 0; i < 4; ++i) {
    c4.graph.add_node(gen::nid(i));
    c4.layout.set(gen::nid(i), p[i]);
  }
  for (std::size_t i = 0; i < 4; ++i) c4.graph.add_edge(i, (i + 1) % 4);
  milp::PlannerConfig cfg;  // K=4, s=1, l_min=2
  auto backend = milp::make_backend("highs");
  const auto t = Clock::now();
  const milp::PlanResult r = milp::iterative_plan(c4.graph, c4.layout, cfg, *backend);
  const double secs = since(t);
  const auto a = gen::audit_layout(c4.graph, c4.layout, r.layout, cfg);
  double ortho_err = 0;
  for (const Segment& s : edge_segments(c4.graph, positions(c4.graph, r.layout))) {
    const double th = gen::angle_of(s.q - s.p);
    const double q = std::numbers::pi / 2;
    ortho_err = std::max(ortho_err, std::abs(th - std::round(th / q) * q));
  }
  const bool ok = r.planar && ortho_err <= 1e-6 && a.min_length >= 2.0 - 1e-6 && a.orthogonal_edges == 4 && secs < 10;
  return {ok, fmt::format("max deviation from horizontal/vertical {:.3g} rad (limit 1e-6), min side {:.6f} (limit 2), "
                          "non-orthogonal edges {} (cost_OR), {:.3f} s (limit 10 s)",
                          ortho_err, a.min_length, 4 - a.orthogonal_edges, secs)};
}

Verdict criterion6() {
  const GraphLayout in = load_graph_file(fixture("ieee30.json"));
  if (in.graph.node_count() != 30 || in.graph.edge_count() != 41) return {false, "fixture is not 30 nodes / 41 edges"};
  const ReductionResult red = reduce_crossings(in.graph, in.layout, ReductionConfig{});
  const auto rep = geom::sweep_intersections(edge_segments(red.graph, positions(red.graph, red.layout)));
  const GraphLayout planar = planarize_with_dummies(red.graph, red.layout, rep);
  milp::PlannerConfig cfg;
  cfg.relative_gap = 0.30;
  cfg.time_limit = 600;
  auto backend = milp::make_backend("highs");
  const auto t = Clock::now();
  const milp::PlanResult r = milp::iterative_plan(planar.graph, planar.layout, cfg, *backend);
  const double secs = since(t);
  const auto a = gen::audit_layout(planar.graph, planar.layout, r.layout, cfg);
  bool solved = !r.rounds.empty();
  for (const auto& log : r.rounds) solved = solved && (log.status == "optimal" || log.status == "gap_reached");
  const bool ok = solved && a.max_axis_error <= 1e-6 && a.min_length >= cfg.l_min - 1e-6 && a.window_violations == 0 &&
                  a.order_violations == 0 && secs < 600;
  return {ok, fmt::format("{} nodes after planarization, {} rounds; axis error {:.3g} rad (limit 1e-6), min length "
                          "{:.6f} (limit {}), window violations {}, cyclic-order violations {}, all rounds within 30% "
                          "gap: {}, {:.1f} s (limit 600 s)",
                          planar.graph.node_count(), r.rounds.size(), a.max_axis_error, a.min_length, cfg.l_min,
                          a.window_violations, a.order_violations, solved ? "yes" : "no", secs)};
}

Verdict criterion7() {
  const GraphLayout in = load_graph_file(fixture("ieee30.json"));
  const auto rep = geom::sweep_intersections(edge_segments(in.graph, positions(in.graph, in.layout)));
  const GraphLayout planar = planarize_with_dummies(in.graph, in.layout, rep);
  milp::PlannerConfig cfg;
  auto backend = milp::make_backend("highs");
  const milp::PlanResult r = milp::iterative_plan(planar.graph, planar.layout, cfg, *backend);
  const std::size_t left = geom::brute_force_intersections(edge_segments(planar.graph, positions(planar.graph, r.layout))).size();
  const std::size_t touching = milp::intersecting_pairs(planar.graph, r.layout).size();
  return {r.planar && r.rounds.size() <= 5 && left == 0 && touching == 0,
          fmt::format("{} dummies, {} rounds (limit 5), {} crossings, {} intersecting non-adjacent pairs", rep.size(),
                      r.rounds.size(), left, touching)};
}

Verdict criterion8() {
  std::mt19937_64 rng(8);
  const GraphLayout gl = gen::perturbed_grid(rng, 10, 10, 0.85, 0.12, 1.6);
  ReductionConfig on;
  ReductionConfig off;
  off.enable_h1 = off.enable_h2 = false;
  auto t = Clock::now();
  const ReductionResult fast = reduce_crossings(gl.graph, gl.layout, on);
  const double t_on = since(t);
  t = Clock::now();
  const ReductionResult slow = reduce_crossings(gl.graph, gl.layout, off);
  const double t_off = since(t);
  const std::size_t c_on = fast.report.final_crossings, c_off = slow.report.final_crossings;
  const bool ok = t_on <= t_off / 3.0 && static_cast<double>(c_on) <= 1.5 * static_cast<double>(c_off);
  return {ok, fmt::format("{} nodes, {} edges, {} initial crossings; H1+H2 {:.3f} s -> {} crossings, unaccelerated "
                          "{:.3f} s -> {}; time ratio {:.3f} (limit 0.333), crossing ratio limit 1.5x",
                          gl.graph.node_count(), gl.graph.edge_count(), fast.report.initial_crossings, t_on, c_on,
                          t_off, c_off, t_on / t_off)};
}

Verdict criterion9() {
  int bad = 0;
  std::string notes;
  auto check = [&](const char* what, double got, double want) {
    if (std::abs(got - want) > 1e-9) {
      ++bad;
      notes += fmt::format(" {}={:.12g}", what, got);
    }
  };
  const GraphLayout ieee = load_graph_file(fixture("ieee30.json"));
  check("m_RP(G,G)", compute_metrics(ieee.graph, ieee.layout, &ieee.layout).rp.value_or(-1), 1.0);
  const GraphLayout sq = gen::unit_square();
  const MetricsReport m = compute_metrics(sq.graph, sq.layout, &sq.layout);
  check("square m_OR", m.orth, 1.0);
  check("square m_EL", m.el, 1.0);
  check("square m_IA", m.ia, 1.0);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const GraphLayout gl = gen::random_graph(rng, 15, 30);
    const long oracle = oracle_crossings(gl.graph, positions(gl.graph, gl.layout));
    check("m_EX", static_cast<double>(compute_metrics(gl.graph, gl.layout).ex), static_cast<double>(-oracle));
  }
  return {bad == 0, fmt::format("m_RP(G,G)=1, unit square m_OR=m_EL=m_IA=1, m_EX=-crossings on 20 random graphs, "
                                "tolerance 1e-9; failures {}{}",
                                bad, notes)};
}

std::size_t assembled_crossings(const Assembly& a) {
  std::size_t d = 0;
  for (const Node& n : a.graph.nodes()) d += n.kind == NodeKind::dummy ? 1 : 0;
  return a.crossings.size() + d;
}

Verdict criterion10() {
  std::mt19937_64 rng(10);
  const GraphLayout gl = gen::perturbed_grid(rng, 20, 25, 0.85, 0.08, 1.6);
  const std::size_t c0 = count_crossings(gl.graph, gl.layout);
  PipelineConfig pc;
  pc.planner.time_limit = 60;
  pc.planner.max_rounds = 5;

  auto t = Clock::now();
  const PartitionPlan p8 = partition_kmeans(gl.graph, gl.layout, 8, 42);
  const auto r8 = solve_partitions_parallel(p8, pc, 4);
  const Assembly a8 = assemble_layout(gl.graph, gl.layout, p8, r8);
  const double t8 = since(t);

  const PartitionPlan p8b = partition_kmeans(gl.graph, gl.layout, 8, 42);
  const auto r8b = solve_partitions_parallel(p8b, pc, 1);
  bool same = p8.assignment == p8b.assignment && r8.size() == r8b.size();
  for (std::size_t c = 0; same && c < r8.size(); ++c)
    same = r8[c].graph == r8b[c].graph && r8[c].layout == r8b[c].layout && r8[c].optimized == r8b[c].optimized;

  t = Clock::now();
  const PartitionPlan p1 = partition_kmeans(gl.graph, gl.layout, 1, 42);
  const auto r1 = solve_partitions_parallel(p1, pc, 4);
  const Assembly a1 = assemble_layout(gl.graph, gl.layout, p1, r1);
  const double t1 = since(t);

  std::size_t optimized = 0;
  for (const auto& r : r8) optimized += r.optimized ? 1 : 0;
  const std::size_t c8 = assembled_crossings(a8);
  const bool ok = same && c8 < c0 && t8 < 0.6 * t1;
  return {ok, fmt::format("{} nodes, {} initial crossings; k=8/4 workers: {} crossings ({} on tie-lines), {}/8 clusters "
                          "optimized, {:.1f} s; 1 vs 4 workers identical: {}; k=1: {} crossings, {:.1f} s{}; time "
                          "ratio {:.3f} (limit 0.6)",
                          gl.graph.node_count(), c0, c8, a8.tie_line_crossings, optimized, t8, same ? "yes" : "no",
                          assembled_crossings(a1), t1, r1[0].optimized ? "" : " (planner fell back)", t8 / t1)};
}

}  // namespace

int main() {
  const std::function<Verdict()> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                               criterion6, criterion7, criterion8, criterion9, criterion10};
  int failed = 0;
  for (int i = 0; i < 10; ++i) {
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", i + 1, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
