#include <chrono>
#include <cmath>
#include <cstdint>

#include "topo/milp/backend.hpp"

// C interface of libhighs; only the calls used here.
extern "C" {
using HighsInt = std::int32_t;
void* Highs_create(void);
void Highs_destroy(void* highs);
HighsInt Highs_run(void* highs);
HighsInt Highs_passMip(void* highs, HighsInt num_col, HighsInt num_row, HighsInt num_nz, HighsInt a_format,
                       HighsInt sense, double offset, const double* col_cost, const double* col_lower,
                       const double* col_upper, const double* row_lower, const double* row_upper,
                       const HighsInt* a_start, const HighsInt* a_index, const double* a_value,
                       const HighsInt* integrality);
HighsInt Highs_setBoolOptionValue(void* highs, const char* option, HighsInt value);
HighsInt Highs_setIntOptionValue(void* highs, const char* option, HighsInt value);
HighsInt Highs_setDoubleOptionValue(void* highs, const char* option, double value);
HighsInt Highs_getSolution(const void* highs, double* col_value, double* col_dual, double* row_value,
                           double* row_dual);
HighsInt Highs_getModelStatus(const void* highs);
double Highs_getObjectiveValue(const void* highs);
HighsInt Highs_getDoubleInfoValue(const void* highs, const char* info, double* value);
HighsInt Highs_getIntInfoValue(const void* highs, const char* info, HighsInt* value);
}

namespace topo::milp {

namespace {

constexpr HighsInt kRowwise = 2;
constexpr HighsInt kMinimize = 1;
constexpr HighsInt kStatusOptimal = 7;
constexpr HighsInt kStatusInfeasible = 8;
constexpr HighsInt kStatusUnboundedOrInfeasible = 9;
constexpr HighsInt kStatusTimeLimit = 13;
constexpr HighsInt kStatusIterationLimit = 14;
constexpr HighsInt kSolutionFeasible = 2;

struct Handle {
  void* h = Highs_create();
  ~Handle() { Highs_destroy(h); }
};

class HighsBackend final : public SolverBackend {
 public:
  std::string name() const override { return "highs"; }
  Capabilities capabilities() const override { return {true, true, true}; }

  SolveResult solve(const MilpModel& model, const SolveOptions& opts) override {
    const auto start = std::chrono::steady_clock::now();
    const auto& vars = model.variables();
    const auto& rows = model.constraints();
    std::vector<double> lo, up, cost = model.objective();
    std::vector<HighsInt> integrality;
    bool mip = false;
    for (const Variable& v : vars) {
      lo.push_back(v.lower);
      up.push_back(v.upper);
      integrality.push_back(v.kind == VarKind::continuous ? 0 : 1);
      mip = mip || v.kind != VarKind::continuous;
    }
    std::vector<double> rlo, rup, value;
    std::vector<HighsInt> start_idx, index;
    for (const Constraint& c : rows) {
      start_idx.push_back(static_cast<HighsInt>(index.size()));
      for (const Term& t : c.terms) {
        index.push_back(static_cast<HighsInt>(t.var));
        value.push_back(t.coef);
      }
      rlo.push_back(c.sense == Sense::le ? -INFINITY : c.rhs);
      rup.push_back(c.sense == Sense::ge ? INFINITY : c.rhs);
    }

    Handle hs;
    Highs_setBoolOptionValue(hs.h, "output_flag", opts.verbose ? 1 : 0);
    Highs_setDoubleOptionValue(hs.h, "time_limit", opts.time_limit);
    Highs_setDoubleOptionValue(hs.h, "mip_rel_gap", opts.relative_gap);
    Highs_setDoubleOptionValue(hs.h, "mip_feasibility_tolerance", opts.feasibility_tolerance);
    Highs_setDoubleOptionValue(hs.h, "primal_feasibility_tolerance", opts.feasibility_tolerance);
    Highs_setIntOptionValue(hs.h, "random_seed", 0);

    SolveResult res;
    const HighsInt pass = Highs_passMip(
        hs.h, static_cast<HighsInt>(vars.size()), static_cast<HighsInt>(rows.size()),
        static_cast<HighsInt>(index.size()), kRowwise, kMinimize, model.objective_offset(), cost.data(), lo.data(),
        up.data(), rlo.data(), rup.data(), start_idx.data(), index.data(), value.data(),
        mip ? integrality.data() : nullptr);
    if (pass < 0) {
      res.message = "model rejected by HiGHS";
      return res;
    }
    Highs_run(hs.h);
    const HighsInt status = Highs_getModelStatus(hs.h);
    HighsInt sol_status = 0;
    Highs_getIntInfoValue(hs.h, "primal_solution_status", &sol_status);
    const bool feasible = sol_status == kSolutionFeasible;
    if (feasible) {
      res.values.resize(vars.size());
      Highs_getSolution(hs.h, res.values.data(), nullptr, nullptr, nullptr);
      res.objective = Highs_getObjectiveValue(hs.h);
    }
    res.bound = res.objective;
    res.gap = 0.0;
    if (mip) {
      Highs_getDoubleInfoValue(hs.h, "mip_dual_bound", &res.bound);
      Highs_getDoubleInfoValue(hs.h, "mip_gap", &res.gap);
      if (!std::isfinite(res.gap)) res.gap = INFINITY;
    }
    if (status == kStatusOptimal && feasible) {
      res.status = mip && res.gap > 1e-9 ? SolveStatus::gap_reached : SolveStatus::optimal;
    } else if (status == kStatusInfeasible || status == kStatusUnboundedOrInfeasible) {
      res.status = SolveStatus::infeasible;
      res.message = "HiGHS reports the model infeasible";
    } else if (status == kStatusTimeLimit || status == kStatusIterationLimit) {
      res.status = feasible ? SolveStatus::time_limit : SolveStatus::timeout;
      res.message = "HiGHS stopped on its limit";
    } else {
      res.status = SolveStatus::error;
      res.message = "HiGHS model status " + std::to_string(status);
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  }
};

}  // namespace

std::unique_ptr<SolverBackend> make_highs_backend() { return std::make_unique<HighsBackend>(); }

}  // namespace topo::milp
