#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cargohitch/formulations.hpp"
#include "cargohitch/pricing.hpp"

namespace cargohitch {

struct LogEntry {
  double ub = 0.0;
  double lb = 0.0;
  int cols = 0;
  double time = 0.0;
};

struct CgProgress {
  int iteration = 0;
  bool full = false;
  double rmp_value = 0.0;
  double lower_bound = 0.0;  // -inf until the first full round
  int columns = 0;           // pool size
};

struct BnpProgress {
  int iteration = 0;  // nodes processed
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  int open_nodes = 0;
};

struct SolveConfig {
  double time_limit = 5400.0;
  double branch_reserve = 900.0;  // price-and-branch: time kept for the integer phase
  double epsilon = 1e-3;
  double phi = 1.0;
  int full_every = 5;
  double slowdown_threshold = 1e-4;
  int slowdown_window = 5;
  double node_ub_time = 60.0;
  double node_cg_time = 120.0;
  std::uint64_t seed = 1;
  bool record_timing = true;  // false zeroes all times so outputs are reproducible

  std::function<void(const SearchRecord&)> on_search;
  std::function<void(const CgProgress&)> on_cg_iteration;
  std::function<void(const BnpProgress&)> on_bnp_iteration;

  void validate() const;
};

// Monotonic wall-clock budget.
class Deadline {
 public:
  explicit Deadline(double seconds);
  [[nodiscard]] double elapsed() const;
  [[nodiscard]] double remaining() const;
  [[nodiscard]] bool expired() const { return remaining() <= 0.0; }

 private:
  std::chrono::steady_clock::time_point start_;
  double limit_;
};

// Branching decisions of a branch-and-price node.
struct NodeBounds {
  std::vector<double> y_lower, y_upper;              // per vehicle, empty = defaults
  std::map<int, std::pair<double, double>> x_bounds;  // per F-arc
  ArcRestrictions restrictions;
};

/// Variable bounds of the master under node decisions (columns violating
/// arc restrictions are fixed to 0).
void materialize_bounds(const MasterState& master, const NodeBounds& node, std::vector<double>& lower,
                        std::vector<double>& upper);

struct CgResult {
  double value = 0.0;  // RMP value at the last LP solve
  double lower_bound = -lp::kInfinity;
  bool had_full_round = false;
  bool converged = false;  // a full round found no negative column
  bool timed_out = false;
  bool infeasible = false;
  int iterations = 0;
  int columns_added = 0;
  lp::LpSolution lp;
  DualValues duals;
  std::vector<LogEntry> log;
};

CgResult column_generation(MasterState& master, const Pricer& pricer, PricingState& pricing, const SolveConfig& config,
                           const Deadline& deadline, const NodeBounds* node = nullptr,
                           const lp::Basis* warm_start = nullptr);

struct Solution {
  std::string algorithm;
  std::string status;  // optimal, time_limit, infeasible
  double objective = lp::kInfinity;
  double lower_bound = -lp::kInfinity;
  double gap = lp::kInfinity;
  std::vector<int> y;                    // per vehicle
  std::map<int, int> x;                  // F-arc -> units, nonzero only
  std::map<int, std::vector<int>> paths; // accepted freight request -> arcs
  std::vector<int> rejected;             // freight requests
  std::vector<std::vector<double>> g;    // per request, per passenger path
  std::vector<LogEntry> log;
  int nodes = 0;
  int columns = 0;
  double wall_time = 0.0;
};

/// Design + routing + penalty cost of the decisions in `s`.
[[nodiscard]] double evaluate_objective(const Solution& s, const ExpandedGraph& graph, const Instance& instance);

/// Re-checks service level, path flow, capacity and design constraints from
/// raw instance data. Returns one message per violation.
[[nodiscard]] std::vector<std::string> check_solution(const Solution& s, const ExpandedGraph& graph,
                                                      const Instance& instance);

[[nodiscard]] std::string solution_json(const Solution& s, const ExpandedGraph& graph, const Instance& instance);
[[nodiscard]] std::string log_csv(const Solution& s);
/// Reads solution_json() output back against the same graph; throws
/// ValidationError on unknown ids or keys.
[[nodiscard]] Solution parse_solution(std::string_view json_text, const ExpandedGraph& graph, const Instance& instance);

/// (ub - lb) / max(ub, 1e-10); throws std::logic_error if lb > ub + 1e-6.
[[nodiscard]] double integrality_gap(double ub, double lb);

/// Vehicle with the most fractional y (ties: lowest index); throws
/// std::logic_error if all values are integral within 1e-6.
[[nodiscard]] int select_branching_variable(std::span<const double> y);

[[nodiscard]] Solution solve_arc_mip(const ExpandedGraph& graph, const Instance& instance, const SolveConfig& config);
[[nodiscard]] Solution price_and_branch(const ExpandedGraph& graph, const Instance& instance, const SolveConfig& config);
[[nodiscard]] Solution branch_and_price(const ExpandedGraph& graph, const Instance& instance, const SolveConfig& config);

// Shared helpers.
[[nodiscard]] Solution solution_from_master(const MasterState& master, std::span<const double> values);
/// All freight rejected, passengers routed by an LP; nullopt if even that is
/// infeasible.
[[nodiscard]] std::optional<Solution> all_rejected(const MasterState& master);
/// Rounds an LP point of the master to an integer plan: the dominant column
/// per request, minimal x and y, then rejections while they lower the cost.
/// Nullopt if no passenger-feasible plan was found.
[[nodiscard]] std::optional<Solution> repair_solution(const MasterState& master, std::span<const double> values);
/// Master variable values realising `s`; its paths must be in the pool.
[[nodiscard]] std::vector<double> master_point(const MasterState& master, const Solution& s);
/// "optimal" when the gap is within epsilon, else "time_limit" or "feasible".
[[nodiscard]] std::string gap_status(double gap, double epsilon, bool out_of_time);

}  // namespace cargohitch
