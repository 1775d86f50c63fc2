#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cargohitch/solve.hpp"

namespace cargohitch {

struct UtilizationSeries {
  struct Temporal {
    int bucket_start = 0;
    int bucket_end = 0;
    double passenger_share = 0.0;  // of all passenger demand, in motion during the bucket
    double freight_share = 0.0;    // of all freight demand
  };
  struct Spatial {
    int stop_a = -1;  // stop_a < stop_b
    int stop_b = -1;
    double passenger_volume = 0.0;
    double freight_volume = 0.0;
  };
  // One row per vehicle arc (stop to next stop) of every vehicle.
  struct VehicleRow {
    int vehicle = -1;
    int arc = -1;
    int segment = -1;  // F-arc containing the arc, or -1
    double passenger_load = 0.0;
    double freight_load = 0.0;
    double freight_capacity = 0.0;  // lambda * x of the segment
    double capacity = 0.0;          // lambda * kappa
  };
  std::vector<Temporal> temporal;
  std::vector<Spatial> spatial;
  std::vector<VehicleRow> vehicles;
};

/// Requests count toward a bucket only while on a vehicle or freight arc,
/// so waiting and walking are excluded.
[[nodiscard]] UtilizationSeries utilization_report(const Solution& solution, const ExpandedGraph& graph,
                                                   const Instance& instance, int bucket_seconds = 300);

[[nodiscard]] std::string temporal_csv(const UtilizationSeries& series);
[[nodiscard]] std::string spatial_csv(const UtilizationSeries& series, const Instance& instance);
[[nodiscard]] std::string vehicles_csv(const UtilizationSeries& series, const ExpandedGraph& graph,
                                       const Instance& instance);

/// Rejected freight demand over all freight demand (0 without freight).
[[nodiscard]] double rejection_share(const Solution& solution, const Instance& instance);

struct SweepGrid {
  std::vector<double> truck_externality{0.05, 0.2, 0.5, 1.0, 2.0};
  std::vector<double> transit_cost{0.0, 0.5, 1.0};
  EconomicParameters base;

  void validate() const;
};

[[nodiscard]] SweepGrid parse_sweep_grid(std::string_view json_text);
[[nodiscard]] SweepGrid load_sweep_grid(const std::string& path);

// Named cost scenarios: optimistic (truck 0.4, c_T 0.1), pessimistic
// (truck 0.2, c_T 0.2).
[[nodiscard]] EconomicParameters scenario(const std::string& name);
[[nodiscard]] std::vector<std::string> scenario_names();

/// Instance with the penalty and transfer cost recomputed from `econ`;
/// everything else is kept.
[[nodiscard]] Instance with_economics(const Instance& instance, const EconomicParameters& econ);

struct SweepResult {
  SweepGrid grid;
  // [transit cost][truck externality], mean over the instances; NaN for a
  // cell whose solves failed.
  std::vector<std::vector<double>> share;
  std::vector<std::vector<int>> failures;
};

enum class Algorithm { ArcMip, PriceAndBranch, BranchAndPrice };
[[nodiscard]] Algorithm parse_algorithm(std::string_view name);
[[nodiscard]] Solution solve(Algorithm algorithm, const ExpandedGraph& graph, const Instance& instance,
                             const SolveConfig& config);

[[nodiscard]] SweepResult sensitivity_sweep(const std::vector<Instance>& instances, const SweepGrid& grid,
                                            Algorithm algorithm, const SolveConfig& config);
[[nodiscard]] std::string sweep_csv(const SweepResult& result);

}  // namespace cargohitch
