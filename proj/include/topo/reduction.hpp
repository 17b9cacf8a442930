#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "topo/geometry/arrangement.hpp"
#include "topo/graph.hpp"

namespace topo {

struct ReductionConfig {
  int bfs_depth = 4;
  double expansion_radius_factor = 0.10;
  bool enable_h1 = true;
  bool enable_h2 = true;

  void validate() const;
};

struct NodeMove {
  Point position;
  int delta = 0;  // predicted crossing change
  bool moved = false;
  std::size_t faces = 0;
};

// Canvas and edge set an optimal move of v searches over.
struct MoveRegion {
  geom::ConvexPolygon canvas;
  std::vector<char> edges;  // 1 for edges represented in the arrangement
};

MoveRegion move_region(const PowerGraph& g, std::span<const Point> pos, std::size_t v, const ReductionConfig& cfg);

NodeMove optimal_move(const PowerGraph& g, std::span<const Point> pos, std::size_t v, const ReductionConfig& cfg);
NodeMove optimal_node_position(const PowerGraph& g, const Layout& layout, const NodeId& v, const ReductionConfig& cfg);

enum class InsertVariant { straight, endpoint_move, inflection };
std::string_view to_string(InsertVariant v);

struct InsertOutcome {
  PowerGraph graph;
  Layout layout;
  InsertVariant variant = InsertVariant::straight;
  std::size_t straight_crossings = 0;
  std::optional<std::size_t> endpoint_crossings;
  std::optional<std::size_t> inflection_crossings;
  std::size_t crossings = 0;  // of the returned layout
};

// Inserts edge (a,b), absent from g, choosing among straight insertion,
// optimal endpoint moves, and a moved inflection node.
InsertOutcome insert_edge_h2(const PowerGraph& g, const Layout& layout, const NodeId& a, const NodeId& b,
                             const ReductionConfig& cfg);

struct MoveRecord {
  NodeId node;
  Point from;
  Point to;
};

struct StepRecord {
  std::string kind;  // "insert", "move", "inflection"
  NodeId node;
  int predicted_delta = 0;
  std::size_t active_before = 0;  // crossings among present edges
  std::size_t active_after = 0;
  std::size_t total = 0;  // crossings of the whole graph after the step
};

struct ReductionReport {
  std::size_t initial_crossings = 0;
  std::size_t final_crossings = 0;
  std::size_t removed_edges = 0;
  std::vector<MoveRecord> moves;
  std::size_t inflections_added = 0;
  std::size_t rejected_moves = 0;
  double wall_time = 0.0;
  std::vector<StepRecord> steps;

  nlohmann::json to_json() const;
};

struct ReductionResult {
  PowerGraph graph;
  Layout layout;
  ReductionReport report;
};

ReductionResult reduce_crossings(const PowerGraph& g, const Layout& layout, const ReductionConfig& cfg);

}  // namespace topo
