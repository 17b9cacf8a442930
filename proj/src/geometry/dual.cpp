#include <deque>

#include "topo/geometry/arrangement.hpp"

namespace topo::geom {

namespace {

bool present(const std::vector<char>* mask, std::size_t e) { return !mask || (*mask)[e] != 0; }

}  // namespace

DualGraph dual_with_increments(const Arrangement& arr, const PowerGraph& g, std::span<const Point> pos, std::size_t v,
                               const std::vector<char>* edge_mask) {
  DualGraph dual;
  dual.face_count = arr.face_count();
  std::vector<std::size_t> nbrs;
  for (std::size_t k = 0; k < g.degree(v); ++k)
    if (present(edge_mask, g.incident_edges(v)[k])) nbrs.push_back(g.neighbors(v)[k]);

  for (std::size_t e = 0; e < arr.edge_count(); ++e) {
    const Arrangement::EdgeRecord& rec = arr.edge(e);
    if (rec.on_canvas()) continue;
    const std::size_t f = arr.half_edge(rec.half).face;
    const std::size_t h = arr.half_edge(rec.half + 1).face;
    if (f == h || f == arr.outer_face() || h == arr.outer_face()) continue;
    int delta = 0;
    for (const Demarcation& d : rec.labels) {
      const int agree = dot_sign(rec.line, d.line);
      int left = 0, right = 0;
      auto tally = [&](std::size_t w, const char* what) {
        const int side = orient(d.line, pos[w]) * agree;
        if (side > 0)
          ++left;
        else if (side < 0)
          ++right;
        else
          dual.warnings.push_back(std::string(what) + " '" + g.node(w).id.str() + "' lies on a demarcation line");
      };
      if (d.kind == DemarcationKind::graph_edge) {
        if (d.edge == npos) continue;
        const Edge& ge = g.edge(d.edge);
        for (std::size_t u : nbrs)
          if (!ge.touches(u)) tally(u, "neighbor");
        delta += left - right;
      } else if (d.kind == DemarcationKind::ray) {
        const std::size_t z = d.source;
        if (z == npos) continue;
        for (std::size_t k = 0; k < g.degree(z); ++k) {
          if (!present(edge_mask, g.incident_edges(z)[k])) continue;
          const std::size_t w = g.neighbors(z)[k];
          if (w != d.observer && w != v) tally(w, "node");
        }
        delta += right - left;
      }
    }
    dual.edges.push_back(DualEdge{f, h, delta});
  }
  return dual;
}

DualGraph dual_with_increments(const Arrangement& arr, const PowerGraph& g, const Layout& layout, const NodeId& v) {
  const std::vector<Point> pos = positions(g, layout);
  return dual_with_increments(arr, g, pos, g.index_of(v));
}

std::vector<std::optional<int>> DualGraph::potentials(std::size_t start) const {
  std::vector<std::vector<std::pair<std::size_t, int>>> adj(face_count);
  for (const DualEdge& e : edges) {
    adj[e.f].push_back({e.g, e.delta});
    adj[e.g].push_back({e.f, -e.delta});
  }
  std::vector<std::optional<int>> pot(face_count);
  std::deque<std::size_t> queue{start};
  pot[start] = 0;
  while (!queue.empty()) {
    const std::size_t f = queue.front();
    queue.pop_front();
    for (const auto& [h, d] : adj[f]) {
      if (pot[h]) continue;
      pot[h] = *pot[f] + d;
      queue.push_back(h);
    }
  }
  return pot;
}

bool DualGraph::connected_without(std::size_t skipped_face) const {
  std::size_t start = skipped_face == 0 ? 1 : 0;
  if (face_count <= 1 || (face_count == 2 && skipped_face < 2)) return true;
  const auto pot = potentials(start);
  for (std::size_t f = 0; f < face_count; ++f)
    if (f != skipped_face && !pot[f]) return false;
  return true;
}

nlohmann::json dual_json(const DualGraph& dual) {
  nlohmann::json edges = nlohmann::json::array();
  for (const DualEdge& e : dual.edges) edges.push_back({{"f", e.f}, {"g", e.g}, {"delta", e.delta}});
  return {{"faces", dual.face_count}, {"edges", std::move(edges)}};
}

}  // namespace topo::geom
