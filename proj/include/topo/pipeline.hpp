#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "topo/error.hpp"
#include "topo/partition.hpp"
#include "topo/render.hpp"

namespace topo {

enum class Stage { full, reduce, plan, metrics, partition };
std::string_view to_string(Stage s);
Stage stage_from_string(std::string_view s);  // throws ConfigError

struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> reference;  // metrics stage; defaults to the input
  Stage stage = Stage::full;
  PipelineConfig pipeline;
  bool auto_params = false;  // take K and s from suggest_params
  int clusters = 0;          // 0: default_cluster_count
  int workers = 1;
  std::uint64_t seed = 42;
  double neighbor_fraction = 0.10;
  int baseline_iterations = 0;  // > 0 adds a force-directed comparison to metrics
  RenderOptions render;
  bool svg = true;

  void validate() const;  // throws ConfigError
};

struct RunOutcome {
  int exit_code = 0;
  nlohmann::json report;
  std::vector<std::filesystem::path> artifacts;
};

// 0 success, 1 input or runtime error, 2 invalid configuration,
// 3 layout model infeasible, timed out, or not planar after max rounds.
int exit_code_for(const Error& e);
nlohmann::json error_json(const std::exception& e);

// Runs one stage and writes its artifacts. Errors other than configuration
// problems are reported through the outcome, with partial artifacts kept.
RunOutcome run_pipeline(const RunConfig& cfg);

}  // namespace topo
