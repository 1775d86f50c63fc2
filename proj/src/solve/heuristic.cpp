#include <algorithm>
#include <cmath>
#include <map>

#include "cargohitch/solve.hpp"

namespace cargohitch {

namespace {

// Greedy plan: one column per freight request, x and y as small as the
// loads allow.
struct Plan {
  std::vector<int> column;     // per request, -1 for passengers
  std::vector<double> load;    // per arc
  std::vector<int> units;      // per arc, ceil(load / lambda)
  std::vector<int> y;          // per vehicle
};

class Planner {
 public:
  explicit Planner(const MasterState& master)
      : master_(master), graph_(master.graph()), instance_(master.instance()) {
    for (int r = 0; r < static_cast<int>(instance_.requests.size()); ++r) {
      if (!instance_.requests[r].is_freight()) continue;
      for (int c : master.columns_of(r)) {
        const Column& col = master.columns()[c];
        if (col.arcs.size() == 1 && col.arcs[0] == graph_.dummy[r]) dummy_[r] = c;
      }
    }
  }

  Plan empty() const {
    Plan p;
    p.column.assign(instance_.requests.size(), -1);
    for (const auto& [r, c] : dummy_) p.column[r] = c;
    p.load.assign(graph_.num_arcs(), 0.0);
    p.units.assign(graph_.num_arcs(), 0);
    p.y.assign(instance_.network.routes.size(), 0);
    return p;
  }

  // Switches request r to column c if the design stays within kappa.
  bool assign(Plan& p, int r, int c) const {
    const double q = instance_.requests[r].demand;
    auto shift = [&](int col, double sign) {
      for (int a : master_.columns()[col].arcs)
        if (graph_.arcs[a].cls == ArcClass::Segment) p.load[a] += sign * q;
    };
    const int old = p.column[r];
    shift(old, -1.0);
    shift(c, +1.0);
    if (!resize(p)) {
      shift(c, -1.0);
      shift(old, +1.0);
      resize(p);
      return false;
    }
    p.column[r] = c;
    return true;
  }

  double cost(const Plan& p) const {
    double total = 0.0;
    for (size_t h = 0; h < p.y.size(); ++h) total += instance_.design_cost(instance_.network.routes[h]) * p.y[h];
    for (size_t r = 0; r < p.column.size(); ++r)
      if (p.column[r] >= 0) total += instance_.requests[r].demand * master_.columns()[p.column[r]].cost;
    return total;
  }

  int dummy(int r) const { return dummy_.at(r); }

  // Values of the master's y, x, z for the plan; g is left to an LP.
  void fix(const Plan& p, std::vector<double>& lower, std::vector<double>& upper) const {
    lower = master_.lower_bounds();
    upper = master_.upper_bounds();
    for (size_t h = 0; h < p.y.size(); ++h) lower[master_.y_var(static_cast<int>(h))] = upper[master_.y_var(static_cast<int>(h))] = p.y[h];
    for (int a : graph_.arcs_of(ArcClass::Segment)) lower[master_.x_var(a)] = upper[master_.x_var(a)] = p.units[a];
    for (size_t c = 0; c < master_.columns().size(); ++c) upper[master_.column_var(static_cast<int>(c))] = 0.0;
    for (size_t r = 0; r < p.column.size(); ++r)
      if (p.column[r] >= 0) lower[master_.column_var(p.column[r])] = upper[master_.column_var(p.column[r])] = 1.0;
  }

 private:
  bool resize(Plan& p) const {
    std::fill(p.y.begin(), p.y.end(), 0);
    bool ok = true;
    for (int a : graph_.arcs_of(ArcClass::Segment)) {
      const VehicleRoute& v = instance_.network.routes[graph_.arcs[a].vehicle];
      const double need = p.load[a] / v.unit_capacity;
      p.units[a] = p.load[a] > 1e-9 ? static_cast<int>(std::ceil(need - 1e-9)) : 0;
      int& y = p.y[graph_.arcs[a].vehicle];
      y = std::max(y, p.units[a]);
      if (y > v.units) ok = false;
    }
    return ok;
  }

  const MasterState& master_;
  const ExpandedGraph& graph_;
  const Instance& instance_;
  std::map<int, int> dummy_;
};

// Rejects accepted requests one at a time while that lowers the cost.
void improve(const Planner& planner, Plan& plan) {
  for (bool better = true; better;) {
    better = false;
    double current = planner.cost(plan);
    for (size_t r = 0; r < plan.column.size(); ++r) {
      const int ri = static_cast<int>(r);
      if (plan.column[r] < 0 || plan.column[r] == planner.dummy(ri)) continue;
      const int keep = plan.column[r];
      planner.assign(plan, ri, planner.dummy(ri));
      const double c = planner.cost(plan);
      if (c < current - 1e-9) {
        current = c;
        better = true;
      } else {
        planner.assign(plan, ri, keep);
      }
    }
  }
}

}  // namespace

std::optional<Solution> repair_solution(const MasterState& master, std::span<const double> values) {
  const Instance& instance = master.instance();
  const Planner planner(master);
  // Preferred column per request: largest LP value, then cheaper.
  struct Pick {
    int request, column;
    double value;
  };
  std::vector<Pick> picks;
  for (int r = 0; r < static_cast<int>(instance.requests.size()); ++r) {
    if (!instance.requests[r].is_freight()) continue;
    int best = -1;
    for (int c : master.columns_of(r)) {
      const double z = values[master.column_var(c)];
      if (best < 0 || z > values[master.column_var(best)] + 1e-9 ||
          (z > values[master.column_var(best)] - 1e-9 && master.columns()[c].cost < master.columns()[best].cost))
        best = c;
    }
    if (best >= 0 && best != planner.dummy(r)) picks.push_back({r, best, values[master.column_var(best)]});
  }
  std::stable_sort(picks.begin(), picks.end(), [](const Pick& a, const Pick& b) { return a.value > b.value; });

  std::optional<Solution> best;
  for (double threshold : {0.5, 1e-6}) {
    Plan plan = planner.empty();
    for (const Pick& p : picks)
      if (p.value >= threshold) planner.assign(plan, p.request, p.column);
    improve(planner, plan);
    // Passengers: route by LP with the design fixed; on failure give freight
    // back one request at a time (freeing capacity only helps passengers).
    std::vector<int> accepted;
    for (const Pick& p : picks)
      if (plan.column[p.request] == p.column) accepted.push_back(p.request);
    while (true) {
      std::vector<double> lower, upper;
      planner.fix(plan, lower, upper);
      const lp::BoundOverride bounds{lower, upper};
      const lp::LpSolution sol = lp::solve_lp(master.lp(), {}, nullptr, &bounds);
      if (sol.status == lp::LpStatus::Optimal) {
        Solution s = solution_from_master(master, sol.values);
        if (!best || s.objective < best->objective) best = std::move(s);
        break;
      }
      if (accepted.empty()) break;
      planner.assign(plan, accepted.back(), planner.dummy(accepted.back()));
      accepted.pop_back();
    }
  }
  return best;
}

}  // namespace cargohitch
