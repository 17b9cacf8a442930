#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "topo/graph.hpp"

namespace topo {

// Proper crossings among the segments; shared endpoints do not count.
std::size_t count_crossings(std::span<const Segment> segments, bool brute_force = false);
std::size_t count_crossings(const PowerGraph& g, const Layout& layout);

struct MetricsReport {
  long long ex = 0;
  double el = 1.0;
  double nd = 1.0;
  double ia = 1.0;
  std::optional<double> rp;
  double orth = 1.0;
  double ev = 0.0;

  nlohmann::json to_json() const;
  static MetricsReport from_json(const nlohmann::json& j);
  // Fixed-width rows in the order EX EL ND IA RP OR EV.
  std::string table() const;
};

// All angles in degrees. m_EX counts dummy nodes as crossings. Edges with an endpoint missing from the reference
// are left out of m_RP. Throws ValidationError when |V| < 2.
MetricsReport compute_metrics(const PowerGraph& g, const Layout& layout, const Layout* reference = nullptr,
                              double neighbor_fraction = 0.10);

// Fruchterman-Reingold spring embedder, deterministic for a given seed.
Layout force_directed_baseline(const PowerGraph& g, std::uint64_t seed, int iterations);

}  // namespace topo
