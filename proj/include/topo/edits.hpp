#pragma once

#include "topo/geometry/sweep.hpp"
#include "topo/graph.hpp"

namespace topo {

struct GraphLayout {
  PowerGraph graph;
  Layout layout;
};

// One degree-4 dummy node per reported crossing; crossing edges are split.
// Crossing indices in the report are edge indices of g.
GraphLayout planarize_with_dummies(const PowerGraph& g, const Layout& layout, const geom::CrossingReport& crossings);

struct InflectionResult {
  PowerGraph graph;
  Layout layout;
  NodeId node;
};

// Splits edge (a,b) at its midpoint. The edge keeps its index as (a,w); (w,b)
// is appended with the same multiplicity.
InflectionResult add_inflection_node(const PowerGraph& g, const Layout& layout, const NodeId& a, const NodeId& b);
// Inverse of add_inflection_node.
GraphLayout remove_inflection_node(const PowerGraph& g, const Layout& layout, const NodeId& w);

}  // namespace topo
