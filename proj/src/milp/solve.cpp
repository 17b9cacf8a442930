#include <cmath>
#include <map>
#include <mutex>

#include "topo/error.hpp"
#include "topo/milp/backend.hpp"

namespace topo::milp {

namespace {

constexpr double kRowTolerance = 1e-6;

struct Registry {
  std::mutex mu;
  std::map<std::string, BackendFactory> factories{{"highs", [] { return make_highs_backend(); }}};
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::gap_reached: return "gap_reached";
    case SolveStatus::time_limit: return "time_limit";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::timeout: return "timeout";
    case SolveStatus::error: return "error";
  }
  return "?";
}

void register_backend(const std::string& name, BackendFactory factory) {
  std::lock_guard lock(registry().mu);
  registry().factories[name] = std::move(factory);
}

std::vector<std::string> backend_names() {
  std::lock_guard lock(registry().mu);
  std::vector<std::string> out;
  for (const auto& [name, f] : registry().factories) out.push_back(name);
  return out;
}

std::unique_ptr<SolverBackend> make_backend(std::string_view name) {
  std::lock_guard lock(registry().mu);
  auto it = registry().factories.find(std::string(name));
  if (it == registry().factories.end()) throw ConfigError("unknown solver backend '" + std::string(name) + "'");
  return it->second();
}

SolveResult solve(const MilpModel& model, SolverBackend& backend, const SolveOptions& opts) {
  model.validate();
  const bool integral = model.count(VarKind::continuous) != model.var_count();
  if (integral && !backend.capabilities().integer_vars)
    throw ConfigError("backend '" + backend.name() + "' does not support integer variables");
  if (model.var_count() == 0) {
    SolveResult r;
    r.status = SolveStatus::optimal;
    r.objective = r.bound = model.objective_offset();
    return r;
  }
  SolveResult res = backend.solve(model, opts);
  if (!has_solution(res.status)) return res;

  if (integral) {
    MilpModel fixed = model;
    std::vector<double> rounded = res.values;
    for (std::size_t i = 0; i < model.var_count(); ++i) {
      if (model.variable(i).kind == VarKind::continuous) continue;
      rounded[i] = std::round(res.values[i]);
      fixed.set_kind(i, VarKind::continuous);
      fixed.set_bounds(i, rounded[i], rounded[i]);
    }
    SolveResult lp = backend.solve(fixed, opts);
    if (lp.status == SolveStatus::optimal) {
      for (std::size_t i = 0; i < model.var_count(); ++i)
        if (model.variable(i).kind != VarKind::continuous) lp.values[i] = rounded[i];
      if (model.max_violation(lp.values) <= model.max_violation(res.values)) {
        res.values = std::move(lp.values);
        res.objective = model.evaluate(res.values);
        res.seconds += lp.seconds;
      }
    }
  }
  const double worst = model.max_violation(res.values);
  if (worst > kRowTolerance) {
    res.status = SolveStatus::error;
    res.message = "solution violates the model by " + std::to_string(worst);
  }
  return res;
}

}  // namespace topo::milp
