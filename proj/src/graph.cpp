#include "topo/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "topo/error.hpp"

namespace topo {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::real: return "real";
    case NodeKind::dummy: return "dummy";
    case NodeKind::inflection: return "inflection";
  }
  return "real";
}

std::optional<NodeKind> node_kind_from_string(std::string_view text) {
  if (text == "real") return NodeKind::real;
  if (text == "dummy") return NodeKind::dummy;
  if (text == "inflection") return NodeKind::inflection;
  return std::nullopt;
}

std::uint64_t PowerGraph::key(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

std::size_t PowerGraph::add_node(NodeId id, NodeKind kind, std::string label) {
  if (id.empty()) throw ValidationError("empty node id");
  if (node_index_.count(id)) throw ValidationError("duplicate node id '" + id.str() + "'");
  const std::size_t v = nodes_.size();
  node_index_.emplace(id, v);
  nodes_.push_back(Node{std::move(id), kind, std::move(label)});
  adjacency_.emplace_back();
  incidence_.emplace_back();
  return v;
}

std::size_t PowerGraph::add_edge(std::size_t a, std::size_t b, int count) {
  if (a >= nodes_.size() || b >= nodes_.size()) throw NotFoundError("edge endpoint index out of range");
  if (a == b) throw ValidationError("self-loop at '" + nodes_[a].id.str() + "'");
  if (count < 1) throw ValidationError("edge multiplicity must be >= 1");
  if (auto it = edge_index_.find(key(a, b)); it != edge_index_.end()) {
    edges_[it->second].count += count;
    return it->second;
  }
  const std::size_t i = edges_.size();
  edges_.push_back(Edge{a, b, count});
  edge_index_.emplace(key(a, b), i);
  adjacency_[a].push_back(b);
  adjacency_[b].push_back(a);
  incidence_[a].push_back(i);
  incidence_[b].push_back(i);
  return i;
}

std::size_t PowerGraph::add_edge(const NodeId& a, const NodeId& b, int count) {
  return add_edge(index_of(a), index_of(b), count);
}

void PowerGraph::rebuild_edge_index() {
  edge_index_.clear();
  for (auto& adj : adjacency_) adj.clear();
  for (auto& inc : incidence_) inc.clear();
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    edge_index_.emplace(key(e.a, e.b), i);
    adjacency_[e.a].push_back(e.b);
    adjacency_[e.b].push_back(e.a);
    incidence_[e.a].push_back(i);
    incidence_[e.b].push_back(i);
  }
}

void PowerGraph::remove_edge(std::size_t i) {
  if (i >= edges_.size()) throw NotFoundError("edge index out of range");
  edges_.erase(edges_.begin() + static_cast<std::ptrdiff_t>(i));
  rebuild_edge_index();
}

void PowerGraph::reroute_edge(std::size_t i, std::size_t a, std::size_t b) {
  if (i >= edges_.size()) throw NotFoundError("edge index out of range");
  if (a == b) throw ValidationError("self-loop");
  if (auto hit = find_edge(a, b); hit && *hit != i) throw ValidationError("reroute would duplicate an edge");
  edges_[i].a = a;
  edges_[i].b = b;
  rebuild_edge_index();
}

void PowerGraph::remove_isolated_node(std::size_t v) {
  if (v >= nodes_.size()) throw NotFoundError("node index out of range");
  if (!adjacency_[v].empty()) throw ValidationError("node '" + nodes_[v].id.str() + "' still has edges");
  node_index_.erase(nodes_[v].id);
  nodes_.erase(nodes_.begin() + static_cast<std::ptrdiff_t>(v));
  adjacency_.erase(adjacency_.begin() + static_cast<std::ptrdiff_t>(v));
  incidence_.erase(incidence_.begin() + static_cast<std::ptrdiff_t>(v));
  for (auto& [id, idx] : node_index_)
    if (idx > v) --idx;
  for (Edge& e : edges_) {
    if (e.a > v) --e.a;
    if (e.b > v) --e.b;
  }
  rebuild_edge_index();
}

std::optional<std::size_t> PowerGraph::find_node(const NodeId& id) const {
  auto it = node_index_.find(id);
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t PowerGraph::index_of(const NodeId& id) const {
  auto it = node_index_.find(id);
  if (it == node_index_.end()) throw NotFoundError("unknown node '" + id.str() + "'");
  return it->second;
}

std::optional<std::size_t> PowerGraph::find_edge(std::size_t a, std::size_t b) const {
  auto it = edge_index_.find(key(a, b));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t PowerGraph::max_degree() const {
  std::size_t best = 0;
  for (const auto& adj : adjacency_) best = std::max(best, adj.size());
  return best;
}

void PowerGraph::validate() const {
  std::size_t degree_sum = 0;
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    degree_sum += adjacency_[v].size();
    const Node& n = nodes_[v];
    if (n.kind == NodeKind::inflection && adjacency_[v].size() != 2)
      throw ValidationError("inflection node '" + n.id.str() + "' must have degree 2");
    if (n.kind == NodeKind::dummy && adjacency_[v].size() != 4)
      throw ValidationError("dummy node '" + n.id.str() + "' must have degree 4");
  }
  if (degree_sum != 2 * edges_.size()) throw ValidationError("adjacency index out of sync with edge set");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.a == e.b) throw ValidationError("self-loop");
    auto hit = find_edge(e.a, e.b);
    if (!hit || *hit != i) throw ValidationError("duplicate edge record");
  }
}

bool PowerGraph::same_records(const PowerGraph& other) const {
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    const Node& l = nodes_[v];
    const Node& r = other.nodes_[v];
    if (l.id != r.id || l.kind != r.kind || l.label != r.label) return false;
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& l = edges_[i];
    const Edge& r = other.edges_[i];
    if (l.a != r.a || l.b != r.b || l.count != r.count) return false;
  }
  return true;
}

const Point& Layout::at(const NodeId& id) const {
  auto it = coords_.find(id);
  if (it == coords_.end()) throw NotFoundError("layout has no coordinates for '" + id.str() + "'");
  return it->second;
}

std::vector<Point> positions(const PowerGraph& g, const Layout& layout) {
  std::vector<Point> pos;
  pos.reserve(g.node_count());
  for (const Node& n : g.nodes()) {
    if (!layout.contains(n.id)) throw ValidationError("layout misses node '" + n.id.str() + "'");
    const Point p = layout.at(n.id);
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw ValidationError("non-finite coordinates for node '" + n.id.str() + "'");
    pos.push_back(p);
  }
  return pos;
}

Layout make_layout(const PowerGraph& g, std::span<const Point> pos) {
  Layout out;
  for (std::size_t v = 0; v < g.node_count(); ++v) out.set(g.node(v).id, pos[v]);
  return out;
}

std::vector<Segment> edge_segments(const PowerGraph& g, std::span<const Point> pos) {
  std::vector<Segment> segs;
  segs.reserve(g.edge_count());
  for (const Edge& e : g.edges()) segs.push_back(Segment{pos[e.a], pos[e.b]});
  return segs;
}

void check_distinct_points(const PowerGraph& g, std::span<const Point> pos) {
  std::map<std::pair<double, double>, std::vector<std::size_t>> seen;
  for (std::size_t v = 0; v < pos.size(); ++v) seen[{pos[v].x, pos[v].y}].push_back(v);
  std::string offenders;
  for (const auto& [p, ids] : seen) {
    if (ids.size() < 2) continue;
    if (!offenders.empty()) offenders += "; ";
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (k) offenders += ", ";
      offenders += g.node(ids[k]).id.str();
    }
  }
  if (!offenders.empty()) throw ValidationError("duplicate coordinates: " + offenders);
}

NodeId next_reserved_id(const PowerGraph& g, std::string_view prefix) {
  long long next = 1;
  for (const Node& n : g.nodes()) {
    const std::string& s = n.id.str();
    if (s.size() <= prefix.size() || s.compare(0, prefix.size(), prefix) != 0) continue;
    long long k = 0;
    auto [ptr, ec] = std::from_chars(s.data() + prefix.size(), s.data() + s.size(), k);
    if (ec == std::errc() && ptr == s.data() + s.size()) next = std::max(next, k + 1);
  }
  return NodeId(std::string(prefix) + std::to_string(next));
}

}  // namespace topo
