#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "topo/edits.hpp"
#include "topo/graph.hpp"

namespace topo::gen {

inline NodeId nid(std::size_t i) { return NodeId(std::to_string(i)); }

inline std::vector<Segment> random_segments(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Segment> out;
  while (out.size() < n) {
    Segment s{{u(rng), u(rng)}, {u(rng), u(rng)}};
    if (distance(s.p, s.q) > 1e-3) out.push_back(s);
  }
  return out;
}

// Pentagon plus pentagram on the unit circle: five crossings, all diagonals.
inline GraphLayout k5() {
  GraphLayout out;
  for (std::size_t i = 0; i < 5; ++i) {
    const double a = std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(i) / 5;
    out.graph.add_node(nid(i));
    out.layout.set(nid(i), {std::cos(a), std::sin(a)});
  }
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) out.graph.add_edge(i, j);
  return out;
}

inline GraphLayout unit_square() {
  GraphLayout out;
  const Point p[] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (std::size_t i = 0; i < 4; ++i) {
    out.graph.add_node(nid(i));
    out.layout.set(nid(i), p[i]);
  }
  for (std::size_t i = 0; i < 4; ++i) out.graph.add_edge(i, (i + 1) % 4);
  return out;
}

// Nodes uniform in the unit square, edges drawn uniformly without repeats.
inline GraphLayout random_graph(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GraphLayout out;
  for (std::size_t i = 0; i < n; ++i) {
    out.graph.add_node(nid(i));
    out.layout.set(nid(i), {u(rng), u(rng)});
  }
  m = std::min(m, n * (n - 1) / 2);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (out.graph.edge_count() < m) {
    const std::size_t a = pick(rng), b = pick(rng);
    if (a != b && !out.graph.find_edge(a, b)) out.graph.add_edge(a, b);
  }
  return out;
}

// Jittered rows x cols lattice keeping each lattice edge with probability
// keep, then a fraction of nodes displaced by up to `kick` spacings.
inline GraphLayout perturbed_grid(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double keep,
                                  double moved_fraction, double kick) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  GraphLayout out;
  std::vector<Point> pos;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      out.graph.add_node(nid(r * cols + c));
      pos.push_back({static_cast<double>(c) + 0.2 * u(rng), static_cast<double>(r) + 0.2 * u(rng)});
    }
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t v = r * cols + c;
      if (c + 1 < cols && coin(rng) < keep) out.graph.add_edge(v, v + 1);
      if (r + 1 < rows && coin(rng) < keep) out.graph.add_edge(v, v + cols);
    }
  for (Point& p : pos)
    if (coin(rng) < moved_fraction) p = p + Point{kick * u(rng), kick * u(rng)};
  for (std::size_t v = 0; v < pos.size(); ++v) out.layout.set(nid(v), pos[v]);
  return out;
}

}  // namespace topo::gen
