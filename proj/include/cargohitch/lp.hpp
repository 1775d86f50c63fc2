#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cargohitch::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RowSense : std::uint8_t { LessEqual, Equal, GreaterEqual };

struct Entry {
  int index;
  double value;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  double cost = 0.0;
  bool integer = false;
};

struct Row {
  std::string name;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

// Minimisation LP/MIP stored column-wise. Rows must exist before a column
// references them; add_row() may also carry row-wise coefficients over
// existing variables.
class LinearProgram {
 public:
  int add_row(Row row, std::span<const Entry> coefficients = {});
  int add_variable(Variable var, std::span<const Entry> column = {});
  void add_coefficient(int row, int var, double value);

  void set_bounds(int var, double lower, double upper);
  void set_cost(int var, double cost) { variables_.at(var).cost = cost; }
  void set_integer(int var, bool integer) { variables_.at(var).integer = integer; }

  [[nodiscard]] int num_rows() const { return static_cast<int>(rows_.size()); }
  [[nodiscard]] int num_variables() const { return static_cast<int>(variables_.size()); }
  [[nodiscard]] const Variable& variable(int j) const { return variables_[j]; }
  [[nodiscard]] const Row& row(int i) const { return rows_[i]; }
  [[nodiscard]] std::span<const Entry> column(int j) const { return columns_[j]; }
  [[nodiscard]] const std::vector<Variable>& variables() const { return variables_; }
  [[nodiscard]] bool has_integers() const;

  /// Throws LpError on inconsistent bounds, non-finite costs or dangling
  /// coefficient references.
  void validate() const;

  /// Row activities a_i . x for a full primal vector.
  [[nodiscard]] std::vector<double> row_activity(std::span<const double> x) const;
  /// Largest bound or row violation of x (0 when feasible).
  [[nodiscard]] double max_violation(std::span<const double> x) const;
  [[nodiscard]] double objective_value(std::span<const double> x) const;

  /// Fixed-point text export (CPLEX LP style), 12 significant digits.
  [[nodiscard]] std::string to_lp_format() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
  std::vector<std::vector<Entry>> columns_;
};

enum class LpStatus : std::uint8_t { Optimal, Infeasible, Unbounded, IterationLimit, TimeLimit, NumericalFailure };

[[nodiscard]] const char* to_string(LpStatus status);

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, Free };

// Simplex basis over structural columns and row slacks. Missing trailing
// entries (the LP grew since the basis was taken) default to "structural at
// a bound" and "slack basic".
struct Basis {
  std::vector<VarStatus> columns;
  std::vector<VarStatus> rows;
  [[nodiscard]] bool empty() const { return columns.empty() && rows.empty(); }
};

struct LpOptions {
  int max_iterations = 200000;
  double time_limit = kInfinity;  // seconds
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  int refactor_interval = 64;
};

// Optional per-solve bound replacement, used by branch-and-bound so that
// the LinearProgram itself stays untouched.
struct BoundOverride {
  std::span<const double> lower;
  std::span<const double> upper;
};

struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  double objective = 0.0;
  double dual_objective = 0.0;
  std::vector<double> values;          // structural primal values
  std::vector<double> duals;           // one per row, d objective / d rhs
  std::vector<double> reduced_costs;   // one per structural column
  Basis basis;
  int iterations = 0;
};

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {}, const Basis* warm_start = nullptr,
                    const BoundOverride* bounds = nullptr);

enum class MipStatus : std::uint8_t { Optimal, Infeasible, Unbounded, TimeLimit, NodeLimit, NumericalFailure };

[[nodiscard]] const char* to_string(MipStatus status);

struct MipProgress {
  int node = 0;
  double best_bound = -kInfinity;
  double incumbent = kInfinity;
};

struct MipOptions {
  double time_limit = kInfinity;
  double gap_tolerance = 1e-6;
  double integrality_tolerance = 1e-6;
  double feasibility_tolerance = 1e-7;
  int max_nodes = 1000000;
  double cutoff = kInfinity;  // nodes bounded at or above this are pruned
  std::optional<std::vector<double>> start_point;
  std::optional<Basis> warm_basis;
  LpOptions lp;
  std::function<void(const MipProgress&)> observer;
};

struct MipSolution {
  MipStatus status = MipStatus::Infeasible;
  bool has_incumbent = false;
  std::vector<double> values;
  double objective = kInfinity;
  double bound = -kInfinity;
  double gap = kInfinity;
  int nodes = 0;
};

/// Relative gap (incumbent - bound) / max(|incumbent|, 1e-10).
[[nodiscard]] double relative_gap(double incumbent, double bound);

/// Best-first branch-and-bound on the integer-flagged variables. Branches on
/// the most fractional variable (ties by lowest index); children inherit the
/// parent's LP value as bound and are warm-started from its basis.
MipSolution branch_and_bound(const LinearProgram& mip, const MipOptions& options = {});

}  // namespace cargohitch::lp
