#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "topo/geometry/predicates.hpp"
#include "topo/graph.hpp"

namespace topo::geom {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct Ray {
  Point origin;
  Point direction;  // unit
};

// Boundary of the region where an edge (p,u) avoids e.
struct VisibilityBoundary {
  Point observer;
  Segment edge;
  Ray first;   // from edge.p away from the observer
  Ray second;  // from edge.q away from the observer
};

// Throws DegeneracyError when u lies on the line through e.
VisibilityBoundary visibility_boundary(const Point& u, const Segment& e);
// Exact test: segment (p,u) does not cross e.
bool in_visibility_region(const VisibilityBoundary& b, const Point& p);

// Counter-clockwise convex polygon.
using ConvexPolygon = std::vector<Point>;

// Monotone chain, counter-clockwise, collinear points dropped.
ConvexPolygon convex_hull(std::span<const Point> points);
// Hull edges shifted outward by r. Fewer than three non-collinear points give
// the bounding box grown by max(r, eps).
ConvexPolygon hull_and_offset(std::span<const Point> points, double r);
// Closed containment.
bool contains(const ConvexPolygon& poly, const Point& p);
// Closed segment/polygon intersection.
bool intersects(const ConvexPolygon& poly, const Segment& s);
ConvexPolygon bounding_box(std::span<const Point> points, double margin);

enum class DemarcationKind { graph_edge, ray, canvas };

struct Demarcation {
  DemarcationKind kind = DemarcationKind::canvas;
  std::size_t edge = npos;      // graph edge index
  std::size_t observer = npos;  // ray: node u
  std::size_t source = npos;    // ray: node z, the ray starts at z
  Line line;                    // supporting line; rays point from u through z
};

// A visibility boundary with the graph elements it came from.
struct LabeledBoundary {
  VisibilityBoundary geometry;
  std::size_t observer = npos;
  std::size_t edge = npos;
  std::size_t first_source = npos;
  std::size_t second_source = npos;
};

class Arrangement {
 public:
  struct HalfEdge {
    std::size_t origin = 0;
    std::size_t twin = 0;
    std::size_t next = 0;
    std::size_t face = 0;
    std::size_t edge = 0;
    bool forward = true;  // runs along the edge line's direction
  };
  struct EdgeRecord {
    Line line;
    std::size_t half = 0;  // forward half-edge; its twin follows it
    std::vector<Demarcation> labels;
    bool on_canvas() const;
  };

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t face_count() const { return face_start_.size(); }  // includes the outer face
  std::size_t outer_face() const { return outer_; }
  const ExactPoint& vertex(std::size_t v) const { return vertices_[v]; }
  const HalfEdge& half_edge(std::size_t h) const { return halves_[h]; }
  const EdgeRecord& edge(std::size_t e) const { return edges_[e]; }
  std::size_t destination(std::size_t h) const { return halves_[halves_[h].twin].origin; }
  const ConvexPolygon& canvas() const { return canvas_; }

  std::vector<std::size_t> face_cycle(std::size_t f) const;
  std::vector<Point> face_polygon(std::size_t f) const;
  bool euler_holds() const;

  // Face containing p. Points on a demarcation go to the face left of its
  // line direction (the canvas side for canvas edges).
  std::size_t locate(const Point& p) const;
  // Strictly inside face f (exact).
  bool strictly_inside(std::size_t f, const Point& p) const;
  // Deterministic interior point; nullopt when no double point is strictly inside.
  std::optional<Point> representative(std::size_t f) const;

  nlohmann::json debug_json() const;

 private:
  friend Arrangement build_arrangement(std::span<const LabeledBoundary>, const ConvexPolygon&);
  int winding(std::size_t f, const Point& p) const;
  bool on_boundary(std::size_t f, const Point& p) const;
  std::optional<std::size_t> edge_through(const Point& p) const;

  ConvexPolygon canvas_;
  std::vector<ExactPoint> vertices_;
  std::vector<HalfEdge> halves_;
  std::vector<EdgeRecord> edges_;
  std::vector<std::size_t> face_start_;
  std::size_t outer_ = 0;
};

Arrangement build_arrangement(std::span<const LabeledBoundary> boundaries, const ConvexPolygon& canvas);
Arrangement build_arrangement(std::span<const VisibilityBoundary> boundaries, const ConvexPolygon& canvas);

struct DualEdge {
  std::size_t f = 0;
  std::size_t g = 0;
  int delta = 0;  // crossing change when the moved node passes from f to g
};

struct DualGraph {
  std::size_t face_count = 0;
  std::vector<DualEdge> edges;
  std::vector<std::string> warnings;

  // Accumulated increments from `start` over a BFS tree; nullopt if unreachable.
  std::vector<std::optional<int>> potentials(std::size_t start) const;
  bool connected_without(std::size_t skipped_face) const;
};

// Increments for moving node v. Graph-edge demarcations use the side counts
// of v's neighbors; ray demarcations R_uz use the side counts of z's
// neighbors. Only edges with mask[e] != 0 count as present (null: all).
DualGraph dual_with_increments(const Arrangement& arr, const PowerGraph& g, std::span<const Point> pos, std::size_t v,
                               const std::vector<char>* edge_mask = nullptr);
DualGraph dual_with_increments(const Arrangement& arr, const PowerGraph& g, const Layout& layout, const NodeId& v);

nlohmann::json dual_json(const DualGraph& dual);

}  // namespace topo::geom
