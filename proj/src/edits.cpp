#include "topo/edits.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "topo/error.hpp"

namespace topo {

namespace {

constexpr double kChainShift = 1e-9;

Point line_meet(Point a, Point b, Point c, Point d) {
  const Point r = b - a;
  const Point s = d - c;
  const double t = cross(c - a, s) / cross(r, s);
  return a + r * t;
}

}  // namespace

GraphLayout planarize_with_dummies(const PowerGraph& g, const Layout& layout, const geom::CrossingReport& crossings) {
  const std::vector<Point> pos = positions(g, layout);
  double scale = 1.0;
  for (const Point& p : pos) scale = std::max({scale, std::fabs(p.x), std::fabs(p.y)});
  const double tol = geom::kExactnessThreshold * scale;

  // Group crossings sharing a point; each group is resolved on its own.
  std::vector<std::size_t> order(crossings.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    const Point& a = crossings.pairs[l].at;
    const Point& b = crossings.pairs[r].at;
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return l < r;
  });
  std::vector<Point> dummy_at(crossings.size());
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k + 1;
    const Point base = crossings.pairs[order[k]].at;
    while (end < order.size() && std::fabs(crossings.pairs[order[end]].at.x - base.x) <= tol &&
           std::fabs(crossings.pairs[order[end]].at.y - base.y) <= tol)
      ++end;
    if (end - k == 1) {
      dummy_at[order[k]] = base;
    } else {
      std::vector<std::size_t> lines;
      for (std::size_t m = k; m < end; ++m) {
        lines.push_back(crossings.pairs[order[m]].a);
        lines.push_back(crossings.pairs[order[m]].b);
      }
      std::sort(lines.begin(), lines.end());
      lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
      auto shifted = [&](std::size_t e, Point& p, Point& q) {
        const std::size_t rank = static_cast<std::size_t>(std::find(lines.begin(), lines.end(), e) - lines.begin());
        p = pos[g.edge(e).a];
        q = pos[g.edge(e).b];
        const Point d = q - p;
        const Point n = Point{-d.y, d.x} * (kChainShift * static_cast<double>(rank) / norm(d));
        p = p + n;
        q = q + n;
      };
      for (std::size_t m = k; m < end; ++m) {
        const geom::Crossing& c = crossings.pairs[order[m]];
        Point p1, q1, p2, q2;
        shifted(c.a, p1, q1);
        shifted(c.b, p2, q2);
        dummy_at[order[m]] = line_meet(p1, q1, p2, q2);
      }
    }
    k = end;
  }

  for (std::size_t v = 0; v < pos.size(); ++v)
    for (const Point& d : dummy_at)
      if (std::fabs(d.x - pos[v].x) <= tol && std::fabs(d.y - pos[v].y) <= tol)
        throw DegeneracyError("crossing point coincides with node '" + g.node(v).id.str() + "'");

  GraphLayout out;
  for (const Node& n : g.nodes()) out.graph.add_node(n.id, n.kind, n.label);
  for (std::size_t v = 0; v < pos.size(); ++v) out.layout.set(g.node(v).id, pos[v]);

  std::vector<std::vector<std::pair<double, std::size_t>>> splits(g.edge_count());
  long long next = 1;
  {
    const NodeId first = next_reserved_id(g, kDummyPrefix);
    next = std::stoll(first.str().substr(kDummyPrefix.size()));
  }
  for (std::size_t i = 0; i < crossings.size(); ++i) {
    const geom::Crossing& c = crossings.pairs[i];
    if (c.a >= g.edge_count() || c.b >= g.edge_count()) throw ValidationError("crossing report does not match graph");
    const NodeId id(std::string(kDummyPrefix) + std::to_string(next++));
    const std::size_t d = out.graph.add_node(id, NodeKind::dummy);
    out.layout.set(id, dummy_at[i]);
    for (std::size_t e : {c.a, c.b}) {
      const Point p = pos[g.edge(e).a];
      const Point dir = pos[g.edge(e).b] - p;
      splits[e].push_back({dot(dummy_at[i] - p, dir) / dot(dir, dir), d});
    }
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    auto& s = splits[e];
    std::sort(s.begin(), s.end());
    std::size_t prev = edge.a;
    for (const auto& [t, d] : s) {
      out.graph.add_edge(prev, d, edge.count);
      prev = d;
    }
    out.graph.add_edge(prev, edge.b, edge.count);
  }
  return out;
}

InflectionResult add_inflection_node(const PowerGraph& g, const Layout& layout, const NodeId& a, const NodeId& b) {
  const std::size_t ia = g.index_of(a);
  const std::size_t ib = g.index_of(b);
  const auto e = g.find_edge(ia, ib);
  if (!e) throw NotFoundError("no edge (" + a.str() + ", " + b.str() + ")");
  const Edge edge = g.edge(*e);

  InflectionResult out{g, layout, next_reserved_id(g, kInflectionPrefix)};
  const std::size_t w = out.graph.add_node(out.node, NodeKind::inflection);
  out.layout.set(out.node, midpoint(layout.at(a), layout.at(b)));
  out.graph.reroute_edge(*e, edge.a, w);
  out.graph.add_edge(w, edge.b, edge.count);
  return out;
}

GraphLayout remove_inflection_node(const PowerGraph& g, const Layout& layout, const NodeId& id) {
  const std::size_t w = g.index_of(id);
  if (g.node(w).kind != NodeKind::inflection || g.degree(w) != 2)
    throw ValidationError("'" + id.str() + "' is not an inflection node");
  std::size_t i = g.incident_edges(w)[0];
  std::size_t j = g.incident_edges(w)[1];
  if (i > j) std::swap(i, j);
  const Edge first = g.edge(i);
  const std::size_t far = g.edge(j).other(w);

  GraphLayout out{g, layout};
  if (g.find_edge(first.other(w), far)) throw ValidationError("removing '" + id.str() + "' would duplicate an edge");
  out.graph.remove_edge(j);
  if (first.a == w)
    out.graph.reroute_edge(i, far, first.b);
  else
    out.graph.reroute_edge(i, first.a, far);
  out.graph.remove_isolated_node(w);
  out.layout.erase(id);
  return out;
}

}  // namespace topo
