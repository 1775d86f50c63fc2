#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "cargohitch/lp.hpp"

namespace cargohitch::lp {

int LinearProgram::add_row(Row row, std::span<const Entry> coefficients) {
  rows_.push_back(std::move(row));
  const int index = num_rows() - 1;
  for (const Entry& e : coefficients) add_coefficient(index, e.index, e.value);
  return index;
}

int LinearProgram::add_variable(Variable var, std::span<const Entry> column) {
  variables_.push_back(std::move(var));
  columns_.emplace_back();
  const int index = num_variables() - 1;
  for (const Entry& e : column) add_coefficient(e.index, index, e.value);
  return index;
}

void LinearProgram::add_coefficient(int row, int var, double value) {
  if (row < 0 || row >= num_rows()) throw LpError(fmt::format("coefficient references unknown row {}", row));
  if (var < 0 || var >= num_variables()) throw LpError(fmt::format("coefficient references unknown variable {}", var));
  if (value == 0.0) return;
  auto& col = columns_[var];
  for (Entry& e : col) {
    if (e.index == row) {
      e.value += value;
      return;
    }
  }
  col.push_back({row, value});
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  auto& v = variables_.at(var);
  v.lower = lower;
  v.upper = upper;
}

bool LinearProgram::has_integers() const {
  return std::any_of(variables_.begin(), variables_.end(), [](const Variable& v) { return v.integer; });
}

void LinearProgram::validate() const {
  for (int j = 0; j < num_variables(); ++j) {
    const Variable& v = variables_[j];
    if (!(v.lower <= v.upper)) throw LpError(fmt::format("variable '{}' has lower bound above upper bound", v.name));
    if (!std::isfinite(v.cost)) throw LpError(fmt::format("variable '{}' has a non-finite cost", v.name));
    for (const Entry& e : columns_[j]) {
      if (e.index < 0 || e.index >= num_rows())
        throw LpError(fmt::format("variable '{}' references unknown row {}", v.name, e.index));
      if (!std::isfinite(e.value)) throw LpError(fmt::format("variable '{}' has a non-finite coefficient", v.name));
    }
  }
  for (const Row& r : rows_) {
    if (!std::isfinite(r.rhs)) throw LpError(fmt::format("row '{}' has a non-finite right-hand side", r.name));
  }
}

std::vector<double> LinearProgram::row_activity(std::span<const double> x) const {
  std::vector<double> activity(rows_.size(), 0.0);
  for (int j = 0; j < num_variables(); ++j) {
    if (x[j] == 0.0) continue;
    for (const Entry& e : columns_[j]) activity[e.index] += e.value * x[j];
  }
  return activity;
}

double LinearProgram::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (int j = 0; j < num_variables(); ++j) {
    worst = std::max({worst, variables_[j].lower - x[j], x[j] - variables_[j].upper});
  }
  const auto activity = row_activity(x);
  for (int i = 0; i < num_rows(); ++i) {
    const double diff = activity[i] - rows_[i].rhs;
    switch (rows_[i].sense) {
      case RowSense::LessEqual: worst = std::max(worst, diff); break;
      case RowSense::GreaterEqual: worst = std::max(worst, -diff); break;
      case RowSense::Equal: worst = std::max(worst, std::abs(diff)); break;
    }
  }
  return worst;
}

double LinearProgram::objective_value(std::span<const double> x) const {
  double total = 0.0;
  for (int j = 0; j < num_variables(); ++j) total += variables_[j].cost * x[j];
  return total;
}

namespace {

std::string number(double v) {
  if (v == kInfinity) return "inf";
  if (v == -kInfinity) return "-inf";
  return fmt::format("{:.12g}", v);
}

std::string sanitize(const std::string& name, char prefix, int index) {
  if (name.empty()) return fmt::format("{}{}", prefix, index);
  std::string out;
  for (char c : name) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  return out;
}

}  // namespace

std::string LinearProgram::to_lp_format() const {
  std::ostringstream os;
  std::vector<std::vector<Entry>> row_wise(rows_.size());
  for (int j = 0; j < num_variables(); ++j)
    for (const Entry& e : columns_[j]) row_wise[e.index].push_back({j, e.value});

  auto var_name = [&](int j) { return sanitize(variables_[j].name, 'v', j) + fmt::format("_{}", j); };
  auto term = [&](double coef, int j) { return fmt::format(" {} {} {}", coef < 0 ? "-" : "+", number(std::abs(coef)), var_name(j)); };

  os << "Minimize\n obj:";
  for (int j = 0; j < num_variables(); ++j)
    if (variables_[j].cost != 0.0) os << term(variables_[j].cost, j);
  os << "\nSubject To\n";
  for (int i = 0; i < num_rows(); ++i) {
    os << " " << sanitize(rows_[i].name, 'r', i) << "_" << i << ":";
    if (row_wise[i].empty()) os << " 0 " << var_name(0);
    for (const Entry& e : row_wise[i]) os << term(e.value, e.index);
    const char* sense = rows_[i].sense == RowSense::LessEqual ? "<=" : rows_[i].sense == RowSense::Equal ? "=" : ">=";
    os << " " << sense << " " << number(rows_[i].rhs) << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < num_variables(); ++j)
    os << " " << number(variables_[j].lower) << " <= " << var_name(j) << " <= " << number(variables_[j].upper) << "\n";
  bool any_int = false;
  for (int j = 0; j < num_variables(); ++j) {
    if (!variables_[j].integer) continue;
    if (!any_int) os << "General\n";
    any_int = true;
    os << " " << var_name(j) << "\n";
  }
  os << "End\n";
  return os.str();
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
    case LpStatus::TimeLimit: return "time_limit";
    case LpStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

const char* to_string(MipStatus status) {
  switch (status) {
    case MipStatus::Optimal: return "optimal";
    case MipStatus::Infeasible: return "infeasible";
    case MipStatus::Unbounded: return "unbounded";
    case MipStatus::TimeLimit: return "time_limit";
    case MipStatus::NodeLimit: return "node_limit";
    case MipStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

}  // namespace cargohitch::lp
