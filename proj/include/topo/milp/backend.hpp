#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "topo/milp/model.hpp"

namespace topo::milp {

struct Capabilities {
  bool integer_vars = false;
  bool relative_gap = false;
  bool time_limit = false;
};

struct SolveOptions {
  double relative_gap = 0.30;
  double time_limit = 600.0;  // seconds
  double feasibility_tolerance = 1e-9;
  int threads = 1;
  bool verbose = false;
};

enum class SolveStatus { optimal, gap_reached, time_limit, infeasible, timeout, error };
std::string_view to_string(SolveStatus s);
// An assignment comes back for optimal, gap_reached and time_limit.
inline bool has_solution(SolveStatus s) {
  return s == SolveStatus::optimal || s == SolveStatus::gap_reached || s == SolveStatus::time_limit;
}

struct SolveResult {
  SolveStatus status = SolveStatus::error;
  std::vector<double> values;
  double objective = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  double seconds = 0.0;
  std::string message;
};

// Plug-in contract: solve() must not keep references to the model after it
// returns and must be callable from several threads on distinct instances.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string name() const = 0;
  virtual Capabilities capabilities() const = 0;
  virtual SolveResult solve(const MilpModel& model, const SolveOptions& opts) = 0;
};

using BackendFactory = std::function<std::unique_ptr<SolverBackend>()>;
void register_backend(const std::string& name, BackendFactory factory);
std::vector<std::string> backend_names();
// Throws ConfigError for an unknown name.
std::unique_ptr<SolverBackend> make_backend(std::string_view name);

std::unique_ptr<SolverBackend> make_highs_backend();

// Validates, solves, then re-solves the LP with integer variables fixed at
// their rounded values to clean up coordinates. On success the returned
// assignment satisfies every row within 1e-6.
SolveResult solve(const MilpModel& model, SolverBackend& backend, const SolveOptions& opts);

}  // namespace topo::milp
