#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "cargohitch/graph.hpp"
#include "cargohitch/lp.hpp"

namespace cargohitch {

// Arc-based MIP over the preprocessed graph. Index vectors hold LP variable
// or row ids; -1 marks entries that do not exist.
struct ArcMip {
  lp::LinearProgram lp;
  std::vector<int> y;                         // per vehicle
  std::vector<int> x;                         // per arc, F-arcs only
  std::vector<std::vector<int>> g;            // per request, per passenger path
  std::vector<std::vector<int>> f;            // per request, per position in graph.freight_arcs
  int service_row = -1;
  std::vector<std::vector<int>> flow_rows;    // per request, per vertex
  std::vector<int> passenger_capacity_rows;   // per arc, V-arcs only
  std::vector<int> freight_capacity_rows;     // per arc, F-arcs only
  std::vector<int> passenger_convexity_rows;  // per request
  std::vector<int> assignment_rows;           // per arc, F-arcs only
  std::vector<int> unit_rows;                 // per vehicle
};

[[nodiscard]] ArcMip build_arc_mip(const ExpandedGraph& graph, const Instance& instance);

// A freight path from (o^r, e^r) to (d^r, l^r) over freight arcs.
struct Column {
  int request = -1;
  std::vector<int> arcs;  // in travel order
  double cost = 0.0;      // per-unit routing cost, sum of arc costs
  [[nodiscard]] std::vector<int> key() const;  // sorted arc ids
};

[[nodiscard]] Column make_column(const ExpandedGraph& graph, int request, std::vector<int> arcs);

struct DualValues {
  std::vector<double> alpha;    // per arc, F-arcs
  std::vector<double> eta;      // per request, freight
  double gamma = 0.0;
  std::vector<double> upsilon;  // per arc, contracted V-arcs
  std::vector<double> nu;       // per arc, uncontracted V-arcs
  std::vector<double> delta;    // per request, passengers
  std::vector<double> pi;       // per arc, F-arcs
  std::vector<double> tau;      // per vehicle
};

class MasterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Restricted master LP over a growing column pool. Starts with the dummy
// path of every freight request.
class MasterState {
 public:
  static constexpr double kArtificialCost = 1e6;

  MasterState(const ExpandedGraph& graph, const Instance& instance);

  /// Adds columns not yet in the pool; returns how many were new.
  int add_columns(std::span<const Column> columns);

  [[nodiscard]] const lp::LinearProgram& lp() const { return lp_; }
  [[nodiscard]] const ExpandedGraph& graph() const { return *graph_; }
  [[nodiscard]] const Instance& instance() const { return *instance_; }
  [[nodiscard]] const std::vector<Column>& columns() const { return columns_; }
  [[nodiscard]] int column_var(int column) const { return column_vars_[column]; }
  [[nodiscard]] const std::vector<int>& columns_of(int request) const { return by_request_[request]; }
  [[nodiscard]] int duplicates_skipped() const { return duplicates_; }

  [[nodiscard]] int y_var(int vehicle) const { return y_[vehicle]; }
  [[nodiscard]] int x_var(int arc) const { return x_[arc]; }
  [[nodiscard]] int g_var(int request, int path) const { return g_[request][path]; }
  [[nodiscard]] int artificial_var(int request) const { return artificial_[request]; }
  [[nodiscard]] int convexity_row(int request) const { return convexity_rows_[request]; }
  [[nodiscard]] int freight_capacity_row(int arc) const { return capacity_rows_[arc]; }

  /// Default variable bounds, the starting point for node-specific bounds.
  [[nodiscard]] std::vector<double> lower_bounds() const;
  [[nodiscard]] std::vector<double> upper_bounds() const;

  /// Maps row duals to named vectors; clamps sign violations up to 1e-6 and
  /// throws MasterError beyond that.
  [[nodiscard]] DualValues extract_duals(const lp::LpSolution& solution) const;

  /// Copy of the master with y, x, z integral over the current pool.
  [[nodiscard]] lp::LinearProgram integerize() const;

 private:
  const ExpandedGraph* graph_;
  const Instance* instance_;
  lp::LinearProgram lp_;
  std::vector<int> y_, x_, artificial_;
  std::vector<std::vector<int>> g_;
  int service_row_ = -1;
  std::vector<int> passenger_rows_;   // per arc, V-arcs
  std::vector<int> capacity_rows_;    // per arc, F-arcs
  std::vector<int> assignment_rows_;  // per arc, F-arcs
  std::vector<int> convexity_rows_;   // per request, freight
  std::vector<int> passenger_convexity_rows_;
  std::vector<int> unit_rows_;        // per vehicle
  std::vector<Column> columns_;
  std::vector<int> column_vars_;
  std::vector<std::vector<int>> by_request_;
  std::vector<std::set<std::vector<int>>> keys_;  // per request, sorted arc lists
  int duplicates_ = 0;
};

}  // namespace cargohitch
