#include "topo/reduction.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <numeric>
#include <tuple>

#include "topo/edits.hpp"
#include "topo/error.hpp"
#include "topo/geometry/sweep.hpp"

namespace topo {

namespace {

constexpr double kMinNodeGap = 1e-6;

std::size_t crossings(const PowerGraph& g, std::span<const Point> pos) {
  const std::vector<Segment> segs = edge_segments(g, pos);
  return geom::sweep_intersections(segs).size();
}

bool clear_of_nodes(std::span<const Point> pos, std::size_t v, const Point& p) {
  for (std::size_t w = 0; w < pos.size(); ++w)
    if (w != v && distance(pos[w], p) <= kMinNodeGap) return false;
  return true;
}

double segment_distance(const Point& w, const Point& p, const Point& q) {
  const Point d = q - p;
  const double len2 = dot(d, d);
  const double t = len2 > 0 ? std::clamp(dot(w - p, d) / len2, 0.0, 1.0) : 0.0;
  return distance(w, p + d * t);
}

// Node v sits on a foreign edge, or one of its edges runs through a node.
bool grazes(const PowerGraph& g, std::span<const Point> pos, std::size_t v) {
  for (const Edge& e : g.edges()) {
    if (e.touches(v)) {
      const std::size_t u = e.other(v);
      for (std::size_t w = 0; w < pos.size(); ++w)
        if (w != v && w != u && segment_distance(pos[w], pos[v], pos[u]) <= kMinNodeGap) return true;
    } else if (segment_distance(pos[v], pos[e.a], pos[e.b]) <= kMinNodeGap) {
      return true;
    }
  }
  return false;
}

PowerGraph subgraph(const PowerGraph& full, const std::vector<char>& active) {
  PowerGraph out;
  for (const Node& n : full.nodes()) out.add_node(n.id, n.kind, n.label);
  for (std::size_t e = 0; e < full.edge_count(); ++e)
    if (active[e]) out.add_edge(full.edge(e).a, full.edge(e).b, full.edge(e).count);
  return out;
}

std::vector<std::size_t> bfs_tree(const PowerGraph& g, std::size_t v, int depth) {
  std::vector<int> dist(g.node_count(), -1);
  std::vector<std::size_t> order{v};
  dist[v] = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t w = order[k];
    if (dist[w] >= depth) continue;
    for (std::size_t x : g.neighbors(w)) {
      if (dist[x] >= 0) continue;
      dist[x] = dist[w] + 1;
      order.push_back(x);
    }
  }
  return order;
}

}  // namespace

void ReductionConfig::validate() const {
  if (bfs_depth < 1) throw ConfigError("bfs_depth must be >= 1");
  if (!(expansion_radius_factor >= 0.0)) throw ConfigError("expansion_radius_factor must be >= 0");
}

std::string_view to_string(InsertVariant v) {
  switch (v) {
    case InsertVariant::straight: return "straight";
    case InsertVariant::endpoint_move: return "endpoint-move";
    case InsertVariant::inflection: return "inflection";
  }
  return "straight";
}

MoveRegion move_region(const PowerGraph& g, std::span<const Point> pos, std::size_t v, const ReductionConfig& cfg) {
  MoveRegion region;
  if (!cfg.enable_h1) {
    double x0 = pos[0].x, x1 = x0, y0 = pos[0].y, y1 = y0;
    for (const Point& p : pos) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    double margin = 0.1 * std::max(x1 - x0, y1 - y0);
    if (margin <= 0.0) margin = 1.0;
    region.canvas = geom::bounding_box(pos, margin);
    region.edges.assign(g.edge_count(), 1);
    return region;
  }
  const std::vector<std::size_t> tree = bfs_tree(g, v, cfg.bfs_depth);
  std::vector<Point> pts;
  for (std::size_t w : tree) pts.push_back(pos[w]);
  const geom::ConvexPolygon hull = geom::convex_hull(pts);
  std::vector<char> covered(g.node_count(), 0);
  if (hull.size() >= 3) {
    for (std::size_t w = 0; w < g.node_count(); ++w) covered[w] = geom::contains(hull, pos[w]);
  } else {
    for (std::size_t w : tree) covered[w] = 1;
  }
  double total = 0.0;
  std::size_t count = 0;
  for (const Edge& e : g.edges()) {
    if (!covered[e.a] || !covered[e.b]) continue;
    total += distance(pos[e.a], pos[e.b]);
    ++count;
  }
  const double mean = count ? total / static_cast<double>(count) : 0.0;
  region.canvas = geom::hull_and_offset(pts, cfg.expansion_radius_factor * mean);
  region.edges.resize(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    region.edges[e] = geom::intersects(region.canvas, Segment{pos[g.edge(e).a], pos[g.edge(e).b]});
  return region;
}

NodeMove optimal_move(const PowerGraph& g, std::span<const Point> pos, std::size_t v, const ReductionConfig& cfg) {
  NodeMove result{pos[v], 0, false, 0};
  if (g.degree(v) == 0) return result;
  const MoveRegion region = move_region(g, pos, v, cfg);

  std::vector<geom::LabeledBoundary> boundaries;
  for (std::size_t u : g.neighbors(v)) {
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (!region.edges[e]) continue;
      const Edge& edge = g.edge(e);
      if (edge.touches(u) || edge.touches(v)) continue;
      const Segment seg{pos[edge.a], pos[edge.b]};
      if (geom::orient(seg.p, seg.q, pos[u]) == 0) continue;  // no proper crossing possible
      boundaries.push_back(geom::LabeledBoundary{geom::visibility_boundary(pos[u], seg), u, e, edge.a, edge.b});
    }
  }
  if (boundaries.empty()) return result;

  const geom::Arrangement arr = geom::build_arrangement(boundaries, region.canvas);
  const geom::DualGraph dual = geom::dual_with_increments(arr, g, pos, v, &region.edges);
  const std::size_t start = arr.locate(pos[v]);
  const auto pot = dual.potentials(start);
  result.faces = arr.face_count() - 1;

  std::vector<std::tuple<int, double, std::size_t, Point>> candidates;
  for (std::size_t f = 0; f < arr.face_count(); ++f) {
    if (f == arr.outer_face() || f == start || !pot[f] || *pot[f] >= 0) continue;
    const auto rep = arr.representative(f);
    if (!rep) continue;
    candidates.emplace_back(*pot[f], distance(*rep, pos[v]), f, *rep);
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& l, const auto& r) {
    if (std::get<0>(l) != std::get<0>(r)) return std::get<0>(l) < std::get<0>(r);
    if (std::get<1>(l) != std::get<1>(r)) return std::get<1>(l) < std::get<1>(r);
    return std::get<2>(l) < std::get<2>(r);
  });
  for (const auto& [delta, dist, f, p] : candidates) {
    if (!clear_of_nodes(pos, v, p)) continue;
    result.position = p;
    result.delta = delta;
    result.moved = true;
    return result;
  }
  return result;
}

NodeMove optimal_node_position(const PowerGraph& g, const Layout& layout, const NodeId& v, const ReductionConfig& cfg) {
  cfg.validate();
  const std::vector<Point> pos = positions(g, layout);
  return optimal_move(g, pos, g.index_of(v), cfg);
}

namespace {

// Mutable reducer state: the whole graph plus the subset of edges drawn so far.
struct Working {
  PowerGraph full;
  std::vector<char> active;
  std::vector<Point> pos;
  std::size_t total = 0;  // crossings of the whole graph at pos
  ReductionReport* report = nullptr;
  const ReductionConfig* cfg = nullptr;

  PowerGraph active_graph() const { return subgraph(full, active); }

  void record(std::string kind, std::size_t v, int delta, std::size_t before, std::size_t after) {
    report->steps.push_back(StepRecord{std::move(kind), v < full.node_count() ? full.node(v).id : NodeId(), delta,
                                       before, after, total});
  }

  // Moves v optimally within g if that strictly lowers crossings among g's
  // edges without raising the whole-graph count.
  bool try_move(const PowerGraph& g, std::size_t v) {
    const NodeMove move = optimal_move(g, pos, v, *cfg);
    if (!move.moved || move.delta >= 0) return false;
    const std::size_t before = crossings(g, pos);
    std::vector<Point> next = pos;
    next[v] = move.position;
    const std::size_t whole = crossings(full, next);
    if (whole > total || grazes(full, next, v)) {
      ++report->rejected_moves;
      return false;
    }
    const std::size_t after = crossings(g, next);
    report->moves.push_back(MoveRecord{full.node(v).id, pos[v], next[v]});
    pos = std::move(next);
    total = whole;
    record("move", v, move.delta, before, after);
    return true;
  }

  void insert_plain(std::size_t e) {
    active[e] = 1;
    const PowerGraph g = active_graph();
    const std::vector<Segment> segs = edge_segments(g, pos);
    const geom::CrossingReport rep = geom::sweep_intersections(segs);
    const std::vector<std::size_t> per_edge = rep.per_segment(g.edge_count());
    const std::size_t ge = *g.find_edge(full.edge(e).a, full.edge(e).b);
    record("insert", g.edge(ge).a, 0, rep.size(), rep.size());

    std::vector<std::size_t> candidates{g.edge(ge).a, g.edge(ge).b};
    for (const geom::Crossing& c : rep.pairs) {
      if (c.a != ge && c.b != ge) continue;
      const Edge& other = g.edge(c.a == ge ? c.b : c.a);
      candidates.push_back(other.a);
      candidates.push_back(other.b);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::vector<std::pair<std::size_t, std::size_t>> weighted;
    for (std::size_t v : candidates) {
      std::size_t c = 0;
      for (std::size_t ie : g.incident_edges(v)) c += per_edge[ie] * per_edge[ie];
      weighted.push_back({c, v});
    }
    std::stable_sort(weighted.begin(), weighted.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
    for (const auto& [c, v] : weighted) try_move(g, v);
  }

  void insert_h2(std::size_t e) {
    active[e] = 1;
    const PowerGraph base = active_graph();
    const std::size_t straight = crossings(base, pos);
    const std::size_t a = full.edge(e).a;
    const std::size_t b = full.edge(e).b;
    record("insert", a, 0, straight, straight);
    if (straight == 0) return;

    // Endpoint variant.
    {
      std::vector<Point> trial = pos;
      std::vector<std::pair<std::size_t, NodeMove>> moved;
      for (std::size_t w : {a, b}) {
        const NodeMove m = optimal_move(base, trial, w, *cfg);
        if (!m.moved || m.delta >= 0) continue;
        trial[w] = m.position;
        moved.push_back({w, m});
      }
      if (!moved.empty()) {
        const std::size_t n = crossings(base, trial);
        const std::size_t whole = crossings(full, trial);
        const bool clean = std::none_of(moved.begin(), moved.end(), [&](const auto& wm) { return grazes(full, trial, wm.first); });
        if (n < straight && whole <= total && clean) {
          int delta = 0;
          for (const auto& [w, m] : moved) {
            report->moves.push_back(MoveRecord{full.node(w).id, pos[w], trial[w]});
            delta += m.delta;
          }
          pos = std::move(trial);
          total = whole;
          record("endpoint-move", moved.front().first, delta, straight, n);
          return;
        }
        if (whole > total || !clean) ++report->rejected_moves;
      }
    }

    // Inflection variant.
    const InflectionResult split =
        add_inflection_node(full, make_layout(full, pos), full.node(a).id, full.node(b).id);
    std::vector<char> active2 = active;
    active2.push_back(1);
    std::vector<Point> pos2 = positions(split.graph, split.layout);
    const PowerGraph base2 = subgraph(split.graph, active2);
    const std::size_t w = split.graph.index_of(split.node);
    const NodeMove m = optimal_move(base2, pos2, w, *cfg);
    if (!m.moved || m.delta >= 0) return;
    pos2[w] = m.position;
    const std::size_t n = crossings(base2, pos2);
    const std::size_t whole = crossings(split.graph, pos2);
    if (n >= straight || whole > total || grazes(split.graph, pos2, w)) {
      if (n < straight) ++report->rejected_moves;
      return;
    }
    full = split.graph;
    active = std::move(active2);
    report->moves.push_back(MoveRecord{split.node, midpoint(pos[a], pos[b]), pos2[w]});
    pos = std::move(pos2);
    total = whole;
    ++report->inflections_added;
    record("inflection", w, m.delta, straight, n);
  }
};

}  // namespace

InsertOutcome insert_edge_h2(const PowerGraph& g, const Layout& layout, const NodeId& a, const NodeId& b,
                             const ReductionConfig& cfg) {
  cfg.validate();
  const std::size_t ia = g.index_of(a);
  const std::size_t ib = g.index_of(b);
  if (g.find_edge(ia, ib)) throw ValidationError("edge (" + a.str() + ", " + b.str() + ") is already present");

  InsertOutcome out;
  out.graph = g;
  out.layout = layout;
  out.graph.add_edge(ia, ib);
  std::vector<Point> pos = positions(out.graph, layout);
  out.straight_crossings = crossings(out.graph, pos);
  out.crossings = out.straight_crossings;
  if (out.straight_crossings == 0) return out;

  std::vector<Point> trial = pos;
  bool any = false;
  for (std::size_t w : {ia, ib}) {
    const NodeMove m = optimal_move(out.graph, trial, w, cfg);
    if (!m.moved || m.delta >= 0) continue;
    trial[w] = m.position;
    any = true;
  }
  if (any) {
    out.endpoint_crossings = crossings(out.graph, trial);
    if (*out.endpoint_crossings < out.straight_crossings) {
      out.layout = make_layout(out.graph, trial);
      out.variant = InsertVariant::endpoint_move;
      out.crossings = *out.endpoint_crossings;
      return out;
    }
  } else {
    out.endpoint_crossings = out.straight_crossings;
  }

  InflectionResult split = add_inflection_node(out.graph, layout, a, b);
  std::vector<Point> pos2 = positions(split.graph, split.layout);
  const std::size_t w = split.graph.index_of(split.node);
  const NodeMove m = optimal_move(split.graph, pos2, w, cfg);
  if (m.moved) pos2[w] = m.position;
  out.inflection_crossings = crossings(split.graph, pos2);
  if (*out.inflection_crossings < out.straight_crossings) {
    out.graph = std::move(split.graph);
    out.layout = make_layout(out.graph, pos2);
    out.variant = InsertVariant::inflection;
    out.crossings = *out.inflection_crossings;
  }
  return out;
}

ReductionResult reduce_crossings(const PowerGraph& g, const Layout& layout, const ReductionConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  ReductionResult result{g, layout, {}};
  Working w;
  w.full = g;
  w.pos = positions(g, layout);
  check_distinct_points(g, w.pos);
  w.report = &result.report;
  w.cfg = &cfg;

  const std::vector<Segment> segs = edge_segments(g, w.pos);
  const geom::CrossingReport initial = geom::sweep_intersections(segs);
  result.report.initial_crossings = initial.size();
  w.total = initial.size();

  // Greedy planarization: drop the edge in the most remaining pairs.
  std::vector<std::size_t> remaining = initial.per_segment(g.edge_count());
  const std::vector<std::size_t> initial_count = remaining;
  std::vector<char> pair_alive(initial.size(), 1);
  std::vector<std::vector<std::size_t>> pairs_of(g.edge_count());
  for (std::size_t k = 0; k < initial.size(); ++k) {
    pairs_of[initial.pairs[k].a].push_back(k);
    pairs_of[initial.pairs[k].b].push_back(k);
  }
  std::vector<std::size_t> removed;
  while (true) {
    const auto it = std::max_element(remaining.begin(), remaining.end());
    if (it == remaining.end() || *it == 0) break;
    const std::size_t e = static_cast<std::size_t>(it - remaining.begin());
    removed.push_back(e);
    for (std::size_t k : pairs_of[e]) {
      if (!pair_alive[k]) continue;
      pair_alive[k] = 0;
      const std::size_t other = initial.pairs[k].a == e ? initial.pairs[k].b : initial.pairs[k].a;
      --remaining[other];
    }
    remaining[e] = 0;
  }
  std::stable_sort(removed.begin(), removed.end(), [&](std::size_t l, std::size_t r) {
    if (initial_count[l] != initial_count[r]) return initial_count[l] > initial_count[r];
    return l < r;
  });
  result.report.removed_edges = removed.size();

  w.active.assign(g.edge_count(), 1);
  for (std::size_t e : removed) w.active[e] = 0;
  for (std::size_t e : removed) {
    if (cfg.enable_h2)
      w.insert_h2(e);
    else
      w.insert_plain(e);
  }

  result.graph = std::move(w.full);
  result.layout = make_layout(result.graph, w.pos);
  result.report.final_crossings = w.total;
  result.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

nlohmann::json ReductionReport::to_json() const {
  nlohmann::json moves_json = nlohmann::json::array();
  for (const MoveRecord& m : moves)
    moves_json.push_back({{"node", m.node.str()}, {"from", {m.from.x, m.from.y}}, {"to", {m.to.x, m.to.y}}});
  nlohmann::json steps_json = nlohmann::json::array();
  for (const StepRecord& s : steps)
    steps_json.push_back({{"kind", s.kind},
                          {"node", s.node.str()},
                          {"predicted_delta", s.predicted_delta},
                          {"active_before", s.active_before},
                          {"active_after", s.active_after},
                          {"total", s.total}});
  return {{"initial_crossings", initial_crossings},
          {"final_crossings", final_crossings},
          {"removed_edges", removed_edges},
          {"inflections_added", inflections_added},
          {"rejected_moves", rejected_moves},
          {"wall_time", wall_time},
          {"moves", std::move(moves_json)},
          {"steps", std::move(steps_json)}};
}

}  // namespace topo
