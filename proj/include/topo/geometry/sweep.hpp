#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "topo/point.hpp"

namespace topo::geom {

struct Crossing {
  std::size_t a = 0;  // a < b, indices into the input sequence
  std::size_t b = 0;
  Point at;
};

// Proper pairwise crossings, sorted by (a, b).
struct CrossingReport {
  std::vector<Crossing> pairs;

  std::size_t size() const noexcept { return pairs.size(); }
  bool empty() const noexcept { return pairs.empty(); }
  // Number of reported pairs each input segment takes part in.
  std::vector<std::size_t> per_segment(std::size_t segment_count) const;
};

// Bentley-Ottmann sweep with exact predicates. Throws ValidationError on a
// zero-length segment and DegeneracyError on endpoints closer than the
// exactness threshold without being equal.
CrossingReport sweep_intersections(std::span<const Segment> segments);

// Quadratic oracle with the same contract.
CrossingReport brute_force_intersections(std::span<const Segment> segments);

// Relative distance below which distinct endpoints count as coincident.
inline constexpr double kExactnessThreshold = 1e-12;

}  // namespace topo::geom
