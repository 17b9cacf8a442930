#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topo/point.hpp"

namespace topo {

class NodeId {
 public:
  NodeId() = default;
  explicit NodeId(std::string value) : value_(std::move(value)) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
  friend bool operator==(const NodeId&, const NodeId&) = default;

 private:
  std::string value_;
};

enum class NodeKind { real, dummy, inflection };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view text);

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::real;
  std::string label;
};

// Abstract line between two node indices; parallel lines are merged into count.
struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  int count = 1;

  std::size_t other(std::size_t v) const { return v == a ? b : a; }
  bool touches(std::size_t v) const { return v == a || v == b; }
};

}  // namespace topo

template <>
struct std::hash<topo::NodeId> {
  std::size_t operator()(const topo::NodeId& id) const noexcept { return std::hash<std::string>{}(id.str()); }
};

namespace topo {

inline constexpr std::string_view kDummyPrefix = "__dummy_";
inline constexpr std::string_view kInflectionPrefix = "__inflect_";

// Undirected graph without self-loops. Node and edge ids are vector indices;
// node indices are stable under edge edits.
class PowerGraph {
 public:
  std::size_t add_node(NodeId id, NodeKind kind = NodeKind::real, std::string label = {});
  // Adds (a,b) or raises the multiplicity of the existing abstract edge.
  std::size_t add_edge(std::size_t a, std::size_t b, int count = 1);
  std::size_t add_edge(const NodeId& a, const NodeId& b, int count = 1);
  // Removes edge i; later edge indices shift down by one.
  void remove_edge(std::size_t i);
  // Rewires edge i to (a,b) keeping its index and multiplicity.
  void reroute_edge(std::size_t i, std::size_t a, std::size_t b);
  // Removes a node with no incident edges; later node indices shift down.
  void remove_isolated_node(std::size_t v);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Node& node(std::size_t v) const { return nodes_.at(v); }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }

  std::optional<std::size_t> find_node(const NodeId& id) const;
  std::size_t index_of(const NodeId& id) const;  // throws NotFoundError
  std::optional<std::size_t> find_edge(std::size_t a, std::size_t b) const;

  // Neighbor node indices, in edge insertion order.
  std::span<const std::size_t> neighbors(std::size_t v) const { return adjacency_.at(v); }
  // Incident edge indices, aligned with neighbors(v).
  std::span<const std::size_t> incident_edges(std::size_t v) const { return incidence_.at(v); }
  std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }
  std::size_t max_degree() const;

  // Checks structural invariants; throws ValidationError.
  void validate() const;

  friend bool operator==(const PowerGraph& l, const PowerGraph& r) {
    return l.nodes_.size() == r.nodes_.size() && l.edges_.size() == r.edges_.size() && l.same_records(r);
  }

 private:
  static std::uint64_t key(std::size_t a, std::size_t b);
  void rebuild_edge_index();
  bool same_records(const PowerGraph& other) const;

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<NodeId, std::size_t> node_index_;
  std::unordered_map<std::uint64_t, std::size_t> edge_index_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::vector<std::size_t>> incidence_;
};

class Layout {
 public:
  void set(const NodeId& id, Point p) { coords_[id] = p; }
  const Point& at(const NodeId& id) const;  // throws NotFoundError
  bool contains(const NodeId& id) const { return coords_.count(id) != 0; }
  std::size_t size() const noexcept { return coords_.size(); }
  void erase(const NodeId& id) { coords_.erase(id); }

  friend bool operator==(const Layout&, const Layout&) = default;

 private:
  std::unordered_map<NodeId, Point> coords_;
};

// Index-aligned positions; throws ValidationError on a missing or non-finite node.
std::vector<Point> positions(const PowerGraph& g, const Layout& layout);
Layout make_layout(const PowerGraph& g, std::span<const Point> pos);
std::vector<Segment> edge_segments(const PowerGraph& g, std::span<const Point> pos);
// Throws ValidationError naming nodes that share a point.
void check_distinct_points(const PowerGraph& g, std::span<const Point> pos);

// Next free id in a reserved namespace, e.g. "__dummy_7".
NodeId next_reserved_id(const PowerGraph& g, std::string_view prefix);

}  // namespace topo
