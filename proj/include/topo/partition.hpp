#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "topo/geometry/sweep.hpp"
#include "topo/graph.hpp"
#include "topo/milp/planner.hpp"
#include "topo/reduction.hpp"

namespace topo {

struct Submodel {
  PowerGraph graph;
  Layout layout;
  std::vector<std::size_t> nodes;  // indices in the full graph
};

struct PartitionPlan {
  int k = 1;
  std::vector<int> assignment;  // cluster per node index
  std::vector<Submodel> submodels;
  std::vector<std::size_t> tie_lines;  // edge indices with endpoints in different clusters

  int cluster_of(const PowerGraph& g, const NodeId& id) const { return assignment.at(g.index_of(id)); }
  nlohmann::json to_json(const PowerGraph& g) const;
};

// Seeded k-means++ then Lloyd iterations (at most 300). Clusters are numbered
// by their lowest node index.
PartitionPlan partition_kmeans(const PowerGraph& g, const Layout& layout, int k, std::uint64_t seed);
int default_cluster_count(std::size_t node_count);

struct PipelineConfig {
  ReductionConfig reduction;
  milp::PlannerConfig planner;
  std::string backend = "highs";
  bool reduce = true;
  bool plan = true;
};

struct ClusterOutcome {
  PowerGraph graph;  // with dummy and inflection nodes
  Layout layout;
  bool optimized = false;  // false: crossing-reduced fallback
  std::string error;
  std::string error_kind;  // Error::kind() of the failure
  std::size_t reduced_crossings = 0;
  std::vector<milp::RoundLog> rounds;
};

// Reduce, planarize and plan one graph; planner failures fall back to the
// crossing-reduced layout with the error recorded.
ClusterOutcome run_cluster(const PowerGraph& g, const Layout& layout, const PipelineConfig& cfg);

std::vector<ClusterOutcome> solve_partitions_parallel(const PartitionPlan& plan, const PipelineConfig& cfg,
                                                      int workers);

struct Assembly {
  PowerGraph graph;
  Layout layout;
  geom::CrossingReport crossings;
  std::size_t internal_crossings = 0;
  std::size_t tie_line_crossings = 0;  // pairs involving at least one tie-line
  std::vector<char> tie_line;          // per edge of `graph`
  std::vector<std::string> warnings;
};

// Places each cluster at its original centroid, scaled to fit its original
// bounding box, and links clusters with straight tie-lines. Auxiliary nodes are
// renumbered globally.
Assembly assemble_layout(const PowerGraph& g, const Layout& original, const PartitionPlan& plan,
                         const std::vector<ClusterOutcome>& clusters);

}  // namespace topo
