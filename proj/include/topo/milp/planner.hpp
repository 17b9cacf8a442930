#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "topo/graph.hpp"
#include "topo/milp/backend.hpp"
#include "topo/milp/model.hpp"

namespace topo::milp {

struct PlannerConfig {
  int K = 4;
  int s = 1;
  bool per_node_s = false;  // s_v = max(1, ceil((deg v - 1) / 2))
  double l_min = 2.0;
  double d_min = 1.0;
  double w_rp = 0.1;
  double w_or = 0.4;
  double w_ev = 0.5;
  std::optional<double> big_m;  // overrides the per-row constants
  double relative_gap = 0.30;
  double time_limit = 600.0;  // per round, seconds
  int max_rounds = 10;

  // Throws ConfigError. With a graph, also checks K against its max degree.
  void validate(const PowerGraph* g = nullptr) const;
  int window(std::size_t degree) const;
  SolveOptions solve_options() const;
};

// Smallest K the degree bound allows: floor(maxdeg / 2) + 1.
int min_K(const PowerGraph& g);

// Sector of u around v, directed both ways for every edge.
using SectorMap = std::map<std::pair<std::size_t, std::size_t>, int>;
int sector_of(const Point& from, const Point& to, int K);
SectorMap derive_sectors(const PowerGraph& g, const Layout& layout, int K);

PlannerConfig suggest_params(const PowerGraph& g, const Layout& layout);

using EdgePair = std::pair<std::size_t, std::size_t>;  // first < second

struct BuiltModel {
  MilpModel model;
  // Variable indices used for extraction.
  std::vector<std::size_t> x, y;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> sec;  // (u, v): sector of u around v
  std::vector<std::size_t> hor, ver, len, diff;                     // per edge, size_t(-1) when absent
  double canvas_radius = 0.0;
};

// Rows and columns follow the K-linear layout model: coordinate identities,
// sector blocks with alignment and length rows, cyclic order, and a
// separation block per planarity pair. The input is centered on its bounding
// box; extracted coordinates are shifted back.
BuiltModel build_model(const PowerGraph& g, const Layout& layout, const SectorMap& sigma, const PlannerConfig& cfg,
                       const std::set<EdgePair>& planarity_pairs);

Layout extract_layout(const PowerGraph& g, const Layout& input, const BuiltModel& built,
                      const std::vector<double>& values);

// Non-adjacent edge pairs whose closed segments meet or come within
// kNearPairTolerance (relative to the coordinate magnitude) of each other.
inline constexpr double kNearPairTolerance = 1e-6;
std::vector<EdgePair> intersecting_pairs(const PowerGraph& g, const Layout& layout);

struct RoundLog {
  int round = 0;
  std::size_t vars = 0;
  std::size_t rows = 0;
  double objective = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  double seconds = 0.0;
  std::string status;
  std::size_t constrained_pairs = 0;
  std::size_t new_pairs = 0;  // intersecting pairs found in this round's output
  std::size_t component = 0;  // connected component the round belongs to
};

struct PlanResult {
  Layout layout;
  std::vector<RoundLog> rounds;
  bool planar = false;
  nlohmann::json log_json() const;
};

// Staged planarity relaxation. Throws InfeasibleError (with model statistics)
// or TimeoutError when a round yields no assignment.
PlanResult iterative_plan(const PowerGraph& g, const Layout& layout, const PlannerConfig& cfg, SolverBackend& backend);

// iterative_plan per connected component. The model fixes no translation, so
// each component is put back with its centroid at its input centroid times
// the ratio of mean output to mean input edge length. Single nodes keep their
// scaled input position. planar also requires no crossings between components.
PlanResult plan_by_component(const PowerGraph& g, const Layout& layout, const PlannerConfig& cfg,
                             SolverBackend& backend);

}  // namespace topo::milp
