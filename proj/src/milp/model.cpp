#include "topo/milp/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "topo/error.hpp"

namespace topo::milp {

std::string_view to_string(VarKind k) {
  switch (k) {
    case VarKind::continuous: return "continuous";
    case VarKind::binary: return "binary";
    case VarKind::integer: return "integer";
  }
  return "?";
}

std::size_t MilpModel::add_var(std::string name, VarKind kind, double lower, double upper) {
  if (kind == VarKind::binary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  if (by_name_.count(name)) throw ValidationError("duplicate variable '" + name + "'");
  by_name_.emplace(name, vars_.size());
  vars_.push_back(Variable{std::move(name), kind, lower, upper});
  cost_.push_back(0.0);
  return vars_.size() - 1;
}

std::size_t MilpModel::add_constraint(std::string name, std::string group, std::vector<Term> terms, Sense sense,
                                      double rhs) {
  // merge repeated variables, drop zeros
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().var == t.var)
      merged.back().coef += t.coef;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  rows_.push_back(Constraint{std::move(name), std::move(group), std::move(merged), sense, rhs});
  return rows_.size() - 1;
}

void MilpModel::set_bounds(std::size_t var, double lower, double upper) {
  vars_.at(var).lower = lower;
  vars_.at(var).upper = upper;
}

void MilpModel::add_objective(std::size_t var, double coef) { cost_.at(var) += coef; }

std::optional<std::size_t> MilpModel::find_var(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t MilpModel::count(VarKind kind) const {
  return static_cast<std::size_t>(std::count_if(vars_.begin(), vars_.end(), [&](const Variable& v) { return v.kind == kind; }));
}

std::map<std::string, std::size_t> MilpModel::group_sizes() const {
  std::map<std::string, std::size_t> out;
  for (const Constraint& c : rows_) ++out[c.group];
  return out;
}

void MilpModel::validate() const {
  for (const Variable& v : vars_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
      throw ValidationError("variable '" + v.name + "' has empty bounds");
  }
  for (const Constraint& c : rows_) {
    if (c.terms.empty()) throw ValidationError("constraint '" + c.name + "' has no terms");
    if (!std::isfinite(c.rhs)) throw ValidationError("constraint '" + c.name + "' has a non-finite right-hand side");
    for (const Term& t : c.terms) {
      if (t.var >= vars_.size()) throw ValidationError("constraint '" + c.name + "' references an undeclared variable");
      if (!std::isfinite(t.coef)) throw ValidationError("constraint '" + c.name + "' has a non-finite coefficient");
    }
  }
}

double MilpModel::evaluate(const std::vector<double>& x) const {
  double s = offset_;
  for (std::size_t i = 0; i < vars_.size(); ++i) s += cost_[i] * x.at(i);
  return s;
}

double MilpModel::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    worst = std::max({worst, vars_[i].lower - x.at(i), x.at(i) - vars_[i].upper});
    if (vars_[i].kind != VarKind::continuous) worst = std::max(worst, std::abs(x[i] - std::round(x[i])));
  }
  for (const Constraint& c : rows_) {
    double lhs = 0.0;
    for (const Term& t : c.terms) lhs += t.coef * x.at(t.var);
    switch (c.sense) {
      case Sense::le: worst = std::max(worst, lhs - c.rhs); break;
      case Sense::ge: worst = std::max(worst, c.rhs - lhs); break;
      case Sense::eq: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
    }
  }
  return worst;
}

namespace {

std::string num(double v) {
  if (v == INFINITY) return "+inf";
  if (v == -INFINITY) return "-inf";
  return fmt::format("{}", v);
}

void write_terms(std::string& out, const std::vector<Term>& terms, const std::vector<Variable>& vars) {
  for (const Term& t : terms) {
    out += t.coef < 0 ? " - " : " + ";
    out += num(std::abs(t.coef));
    out += ' ';
    out += vars[t.var].name;
  }
}

}  // namespace

std::string export_lp(const MilpModel& model) {
  const auto& vars = model.variables();
  std::string out = "\\ topo layout model\nMinimize\n obj:";
  std::vector<Term> obj;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (model.objective()[i] != 0.0) obj.push_back({i, model.objective()[i]});
  write_terms(out, obj, vars);
  if (model.objective_offset() != 0.0 || obj.empty()) {
    const double c = model.objective_offset();
    out += c < 0 ? " - " : " + ";
    out += num(std::abs(c));
  }
  out += "\nSubject To\n";
  for (const Constraint& c : model.constraints()) {
    out += ' ';
    out += c.name;
    out += ':';
    write_terms(out, c.terms, vars);
    out += c.sense == Sense::le ? " <= " : c.sense == Sense::ge ? " >= " : " = ";
    out += num(c.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (const Variable& v : vars) {
    if (v.lower == -INFINITY && v.upper == INFINITY)
      out += fmt::format(" {} free\n", v.name);
    else
      out += fmt::format(" {} <= {} <= {}\n", num(v.lower), v.name, num(v.upper));
  }
  auto list = [&](VarKind kind, const char* title) {
    if (model.count(kind) == 0) return;
    out += title;
    out += '\n';
    for (const Variable& v : vars)
      if (v.kind == kind) out += " " + v.name + "\n";
  };
  list(VarKind::integer, "General");
  list(VarKind::binary, "Binary");
  out += "End\n";
  return out;
}

namespace {

double parse_num(const std::string& tok, std::size_t line) {
  if (tok == "+inf" || tok == "inf" || tok == "+infinity" || tok == "infinity") return INFINITY;
  if (tok == "-inf" || tok == "-infinity") return -INFINITY;
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(fmt::format("line {}: expected a number, got '{}'", line, tok));
  }
}

bool is_number(const std::string& tok) {
  if (tok.empty()) return false;
  const char c = tok[0];
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || tok == "+inf" || tok == "-inf" || tok == "inf";
}

struct Linear {
  std::vector<std::pair<std::string, double>> terms;
  double constant = 0.0;
};

// Parses "+ 2 x - 3 y + 4" style token runs.
Linear parse_linear(const std::vector<std::string>& toks, std::size_t begin, std::size_t end, std::size_t line) {
  Linear lin;
  double sign = 1.0;
  std::optional<double> coef;
  for (std::size_t k = begin; k < end; ++k) {
    const std::string& t = toks[k];
    if (t == "+" || t == "-") {
      if (coef) {
        lin.constant += sign * *coef;
        coef.reset();
      }
      sign = t == "-" ? -1.0 : 1.0;
    } else if (is_number(t)) {
      if (coef) throw ParseError(fmt::format("line {}: two numbers in a row", line));
      coef = parse_num(t, line);
    } else {
      lin.terms.push_back({t, sign * coef.value_or(1.0)});
      coef.reset();
      sign = 1.0;
    }
  }
  if (coef) lin.constant += sign * *coef;
  return lin;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

MilpModel parse_lp(std::string_view text) {
  enum class Section { none, objective, rows, bounds, general, binary, end };
  struct Line {
    std::size_t number;
    Section section;
    std::vector<std::string> toks;
  };
  std::vector<Line> lines;
  Section section = Section::none;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto c = raw.find('\\'); c != std::string::npos) raw.erase(c);
    const auto toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string head = lower(toks[0]);
    if (head == "minimize" || head == "minimise") {
      section = Section::objective;
      continue;
    }
    if (toks.size() == 2 && head == "subject" && lower(toks[1]) == "to") {
      section = Section::rows;
      continue;
    }
    if (head == "bounds") {
      section = Section::bounds;
      continue;
    }
    if (head == "general" || head == "generals") {
      section = Section::general;
      continue;
    }
    if (head == "binary" || head == "binaries") {
      section = Section::binary;
      continue;
    }
    if (head == "end") {
      section = Section::end;
      continue;
    }
    if (section == Section::none || section == Section::end)
      throw ParseError(fmt::format("line {}: content outside a section", number));
    lines.push_back({number, section, toks});
  }

  MilpModel model;
  // Bounds first so variables keep their written order.
  for (const Line& l : lines) {
    if (l.section != Section::bounds) continue;
    const auto& t = l.toks;
    if (t.size() == 2 && lower(t[1]) == "free") {
      model.add_var(t[0], VarKind::continuous, -INFINITY, INFINITY);
    } else if (t.size() == 5 && t[1] == "<=" && t[3] == "<=") {
      model.add_var(t[2], VarKind::continuous, parse_num(t[0], l.number), parse_num(t[4], l.number));
    } else {
      throw ParseError(fmt::format("line {}: unsupported bound", l.number));
    }
  }
  std::vector<Variable> vars = model.variables();
  for (const Line& l : lines) {
    if (l.section != Section::general && l.section != Section::binary) continue;
    for (const std::string& name : l.toks) {
      auto it = std::find_if(vars.begin(), vars.end(), [&](const Variable& v) { return v.name == name; });
      if (it == vars.end()) throw ParseError(fmt::format("line {}: '{}' has no bounds entry", l.number, name));
      it->kind = l.section == Section::general ? VarKind::integer : VarKind::binary;
    }
  }
  MilpModel out;
  for (const Variable& v : vars) out.add_var(v.name, v.kind, v.lower, v.upper);
  auto index = [&](const std::string& name, std::size_t line) {
    auto i = out.find_var(name);
    if (!i) throw ParseError(fmt::format("line {}: undeclared variable '{}'", line, name));
    return *i;
  };
  for (const Line& l : lines) {
    if (l.section == Section::objective) {
      std::size_t start = 0;
      if (!l.toks.empty() && l.toks[0].back() == ':') start = 1;
      const Linear lin = parse_linear(l.toks, start, l.toks.size(), l.number);
      for (const auto& [name, c] : lin.terms) out.add_objective(index(name, l.number), c);
      out.add_objective_offset(lin.constant);
    } else if (l.section == Section::rows) {
      const auto& t = l.toks;
      if (t.empty() || t[0].back() != ':') throw ParseError(fmt::format("line {}: row without a name", l.number));
      auto op = std::find_if(t.begin(), t.end(), [](const std::string& s) { return s == "<=" || s == ">=" || s == "="; });
      if (op == t.end() || op + 2 != t.end()) throw ParseError(fmt::format("line {}: malformed row", l.number));
      const std::size_t at = static_cast<std::size_t>(op - t.begin());
      const Linear lin = parse_linear(t, 1, at, l.number);
      std::vector<Term> terms;
      for (const auto& [name, c] : lin.terms) terms.push_back({index(name, l.number), c});
      const Sense sense = *op == "<=" ? Sense::le : *op == ">=" ? Sense::ge : Sense::eq;
      out.add_constraint(t[0].substr(0, t[0].size() - 1), "", std::move(terms), sense,
                         parse_num(t.back(), l.number) - lin.constant);
    }
  }
  return out;
}

}  // namespace topo::milp
