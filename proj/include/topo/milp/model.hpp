#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace topo::milp {

enum class VarKind { continuous, binary, integer };
enum class Sense { le, eq, ge };

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = 0.0;
};

struct Term {
  std::size_t var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::string group;  // family tag used in statistics
  std::vector<Term> terms;
  Sense sense = Sense::le;
  double rhs = 0.0;
};

class MilpModel {
 public:
  std::size_t add_var(std::string name, VarKind kind, double lower, double upper);
  std::size_t add_constraint(std::string name, std::string group, std::vector<Term> terms, Sense sense, double rhs);
  void add_objective(std::size_t var, double coef);
  void add_objective_offset(double c) { offset_ += c; }
  void set_bounds(std::size_t var, double lower, double upper);
  void set_kind(std::size_t var, VarKind kind) { vars_.at(var).kind = kind; }

  std::size_t var_count() const noexcept { return vars_.size(); }
  std::size_t row_count() const noexcept { return rows_.size(); }
  const std::vector<Variable>& variables() const noexcept { return vars_; }
  const std::vector<Constraint>& constraints() const noexcept { return rows_; }
  const Variable& variable(std::size_t i) const { return vars_.at(i); }
  std::optional<std::size_t> find_var(std::string_view name) const;
  // Dense objective coefficients, index-aligned with variables().
  const std::vector<double>& objective() const noexcept { return cost_; }
  double objective_offset() const noexcept { return offset_; }

  std::size_t count(VarKind kind) const;
  std::map<std::string, std::size_t> group_sizes() const;

  // Throws ValidationError on an empty row, bad bounds or dangling terms.
  void validate() const;

  double evaluate(const std::vector<double>& x) const;
  // Largest bound or row violation of x.
  double max_violation(const std::vector<double>& x) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::vector<double> cost_;
  double offset_ = 0.0;
  std::unordered_map<std::string, std::size_t> by_name_;
};

std::string_view to_string(VarKind k);

// CPLEX-style LP text. Deterministic: variables and rows in declaration order.
std::string export_lp(const MilpModel& model);
// Reads the subset of LP written by export_lp. Throws ParseError.
MilpModel parse_lp(std::string_view text);

}  // namespace topo::milp
