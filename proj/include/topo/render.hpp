#pragma once

#include <string>
#include <vector>

#include "topo/graph.hpp"

namespace topo {

struct RenderOptions {
  double width = 800.0;         // pixels; height follows the aspect ratio
  double node_radius = 0.006;   // fraction of the layout diagonal
  double margin = 0.05;         // fraction of each extent
  bool mark_crossings = true;
  std::vector<char> tie_line;   // optional, per edge
};

// Deterministic SVG. Classes: edge, tie-line, node, dummy, inflection,
// crossing, tie-crossing.
std::string render_svg(const PowerGraph& g, const Layout& layout, const RenderOptions& options = {});

}  // namespace topo
