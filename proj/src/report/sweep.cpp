#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "cargohitch/report.hpp"

namespace cargohitch {

void SweepGrid::validate() const {
  if (truck_externality.empty()) throw ValidationError("truck_externality", "sweep grid", "axis is empty");
  if (transit_cost.empty()) throw ValidationError("transit_cost", "sweep grid", "axis is empty");
  for (double v : truck_externality)
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("truck_externality", "sweep grid", "values must be positive");
  for (double v : transit_cost)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("transit_cost", "sweep grid", "values must be nonnegative");
}

SweepGrid parse_sweep_grid(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("grid", "sweep grid", e.what());
  }
  if (!j.is_object()) throw ValidationError("grid", "sweep grid", "expected a JSON object");
  SweepGrid g;
  auto axis = [&](const char* key, std::vector<double>& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_array()) throw ValidationError(key, "sweep grid", "expected an array of numbers");
    out.clear();
    for (const auto& v : j[key]) {
      if (!v.is_number()) throw ValidationError(key, "sweep grid", "expected an array of numbers");
      out.push_back(v.get<double>());
    }
  };
  axis("truck_externality", g.truck_externality);
  axis("transit_cost", g.transit_cost);
  if (j.contains("base")) {
    const auto& b = j["base"];
    if (!b.is_object()) throw ValidationError("base", "sweep grid", "expected an object");
    auto field = [&](const char* key, double& out) {
      if (!b.contains(key)) return;
      if (!b[key].is_number()) throw ValidationError(key, "sweep grid", "expected a number");
      out = b[key].get<double>();
    };
    EconomicParameters& e = g.base;
    field("investment", e.investment);
    field("years", e.years);
    field("base_rate", e.base_rate);
    field("truck_tour_km", e.truck_tour_km);
    field("truck_capacity", e.truck_capacity);
    field("parcels_per_unit", e.parcels_per_unit);
    field("bike_externality", e.bike_externality);
    field("bike_tour_km", e.bike_tour_km);
    field("bike_capacity", e.bike_capacity);
    field("routing_rate", e.routing_rate);
  }
  g.validate();
  return g;
}

SweepGrid load_sweep_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("grid-file", path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep_grid(ss.str());
}

std::vector<std::string> scenario_names() { return {"optimistic", "pessimistic"}; }

EconomicParameters scenario(const std::string& name) {
  EconomicParameters e;
  if (name == "optimistic") {
    e.truck_externality = 0.4;
    e.transit_cost = 0.1;
  } else if (name == "pessimistic") {
    e.truck_externality = 0.2;
    e.transit_cost = 0.2;
  } else {
    throw ValidationError("scenario", name, "unknown scenario; known scenarios: optimistic, pessimistic");
  }
  return e;
}

Instance with_economics(const Instance& instance, const EconomicParameters& econ) {
  const CostModel derived = derive_costs(econ);
  Instance out = instance;
  out.costs.penalty_per_unit = derived.penalty_per_unit;
  out.costs.transit_cost = derived.transit_cost;
  for (Request& r : out.requests) r.penalty.reset();
  return out;
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "mip") return Algorithm::ArcMip;
  if (name == "pnb") return Algorithm::PriceAndBranch;
  if (name == "bnp") return Algorithm::BranchAndPrice;
  throw ValidationError("algo", std::string(name), "unknown algorithm; known algorithms: mip, pnb, bnp");
}

Solution solve(Algorithm algorithm, const ExpandedGraph& graph, const Instance& instance, const SolveConfig& config) {
  switch (algorithm) {
    case Algorithm::ArcMip:
      return solve_arc_mip(graph, instance, config);
    case Algorithm::PriceAndBranch:
      return price_and_branch(graph, instance, config);
    case Algorithm::BranchAndPrice:
      return branch_and_price(graph, instance, config);
  }
  throw std::logic_error("unknown algorithm");
}

SweepResult sensitivity_sweep(const std::vector<Instance>& instances, const SweepGrid& grid, Algorithm algorithm,
                              const SolveConfig& config) {
  grid.validate();
  SweepResult res;
  res.grid = grid;
  const size_t rows = grid.transit_cost.size(), cols = grid.truck_externality.size();
  res.share.assign(rows, std::vector<double>(cols, 0.0));
  res.failures.assign(rows, std::vector<int>(cols, 0));
  for (size_t i = 0; i < rows; ++i)
    for (size_t k = 0; k < cols; ++k) {
      EconomicParameters econ = grid.base;
      econ.truck_externality = grid.truck_externality[k];
      econ.transit_cost = grid.transit_cost[i];
      double sum = 0.0;
      int solved = 0;
      for (const Instance& base : instances) {
        try {
          const Instance inst = with_economics(base, econ);
          const ExpandedGraph graph = build_graph(inst);
          const Solution s = solve(algorithm, graph, inst, config);
          if (s.status == "infeasible") throw std::runtime_error("infeasible");
          sum += rejection_share(s, inst);
          ++solved;
        } catch (const std::exception&) {
          ++res.failures[i][k];
        }
      }
      res.share[i][k] = solved > 0 ? sum / solved : std::numeric_limits<double>::quiet_NaN();
    }
  return res;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "transit_cost";
  for (double t : result.grid.truck_externality) out += fmt::format(",truck_{:g}", t);
  out += "\n";
  for (size_t i = 0; i < result.grid.transit_cost.size(); ++i) {
    out += fmt::format("{:g}", result.grid.transit_cost[i]);
    for (double v : result.share[i]) out += std::isnan(v) ? std::string(",NA") : fmt::format(",{:.3f}", v);
    out += "\n";
  }
  return out;
}

}  // namespace cargohitch
