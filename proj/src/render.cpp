#include "topo/render.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "topo/geometry/sweep.hpp"

namespace topo {

namespace {

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kStyle =
    "<style>\n"
    ".edge{stroke:#555;stroke-width:1;fill:none}\n"
    ".tie-line{stroke:#999;stroke-width:1;stroke-dasharray:4 2;fill:none}\n"
    ".node{fill:#1f77b4}\n"
    ".inflection{fill:#7f7f7f}\n"
    ".dummy{fill:#8c564b}\n"
    ".crossing{fill:#ff7f0e}\n"
    ".tie-crossing{fill:#8c564b}\n"
    "</style>\n";

}  // namespace

std::string render_svg(const PowerGraph& g, const Layout& layout, const RenderOptions& options) {
  const std::vector<Point> pos = positions(g, layout);
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!pos.empty()) {
    x0 = y0 = INFINITY;
    x1 = y1 = -INFINITY;
    for (const Point& p : pos) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  }
  double w = x1 - x0, h = y1 - y0;
  if (w <= 0) w = std::max(h, 1.0);
  if (h <= 0) h = std::max(w, 1.0);
  const double mx = w * options.margin, my = h * options.margin;
  // SVG y grows downward; layouts use y up
  const double vx = x0 - mx, vy = -(y1 + my), vw = w + 2 * mx, vh = h + 2 * my;
  const double px = options.width, py = options.width * vh / vw;
  const double r = options.node_radius * std::hypot(w, h);
  auto fx = [](double v) { return fmt::format("{:.6f}", v); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">\n",
      fx(px), fx(py), fx(vx), fx(vy), fx(vw), fx(vh));
  svg += kStyle;
  svg += "<g id=\"edges\">\n";
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Point& a = pos[g.edge(e).a];
    const Point& b = pos[g.edge(e).b];
    const bool tie = e < options.tie_line.size() && options.tie_line[e];
    svg += fmt::format("<line class=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke-width=\"{}\"/>\n",
                       tie ? "tie-line" : "edge", fx(a.x), fx(-a.y), fx(b.x), fx(-b.y), fx(r / 3));
  }
  svg += "</g>\n<g id=\"nodes\">\n";
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const Node& n = g.node(v);
    const char* cls = n.kind == NodeKind::real ? "node" : n.kind == NodeKind::dummy ? "dummy" : "inflection";
    const double rr = n.kind == NodeKind::inflection ? r / 2 : r;
    svg += fmt::format("<circle class=\"{}\" cx=\"{}\" cy=\"{}\" r=\"{}\"><title>{}</title></circle>\n", cls,
                       fx(pos[v].x), fx(-pos[v].y), fx(rr), escape(n.label.empty() ? n.id.str() : n.label));
  }
  svg += "</g>\n";
  if (options.mark_crossings && g.edge_count() > 1) {
    const geom::CrossingReport rep = geom::sweep_intersections(edge_segments(g, pos));
    svg += "<g id=\"crossings\">\n";
    for (const geom::Crossing& c : rep.pairs) {
      const bool tie = (c.a < options.tie_line.size() && options.tie_line[c.a]) ||
                       (c.b < options.tie_line.size() && options.tie_line[c.b]);
      svg += fmt::format("<circle class=\"{}\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n", tie ? "tie-crossing" : "crossing",
                         fx(c.at.x), fx(-c.at.y), fx(r * 0.8));
    }
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace topo
