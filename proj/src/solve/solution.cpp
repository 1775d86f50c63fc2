#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "cargohitch/solve.hpp"

namespace cargohitch {

void SolveConfig::validate() const {
  auto fail = [](const char* field, const char* msg) { throw ValidationError(field, "solve config", msg); };
  if (!(time_limit > 0.0)) fail("time_limit", "time limit must be positive");
  if (!(branch_reserve >= 0.0 && branch_reserve < time_limit))
    fail("branch_reserve", "branching reserve must lie in [0, time limit)");
  if (!(epsilon > 0.0)) fail("epsilon", "epsilon must be positive");
  if (!(phi > 0.0 && phi <= 1.0)) fail("phi", "phi must lie in (0, 1]");
  if (full_every < 1) fail("full_every", "full pricing cadence must be at least 1");
  if (!(node_ub_time > 0.0) || !(node_cg_time > 0.0)) fail("node_time", "node time limits must be positive");
}

Deadline::Deadline(double seconds) : start_(std::chrono::steady_clock::now()), limit_(seconds) {}

double Deadline::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

double Deadline::remaining() const { return limit_ - elapsed(); }

double integrality_gap(double ub, double lb) {
  if (lb > ub + 1e-6) throw std::logic_error(fmt::format("lower bound {} exceeds upper bound {}", lb, ub));
  return (ub - lb) / std::max(ub, 1e-10);
}

int select_branching_variable(std::span<const double> y) {
  int best = -1;
  double best_score = 0.0;
  for (size_t h = 0; h < y.size(); ++h) {
    const double frac = y[h] - std::floor(y[h]);
    const double score = std::min(frac, 1.0 - frac);
    if (score <= 1e-6) continue;
    if (best < 0 || score > best_score + 1e-12) {
      best = static_cast<int>(h);
      best_score = score;
    }
  }
  if (best < 0) throw std::logic_error("no fractional design variable to branch on");
  return best;
}

double evaluate_objective(const Solution& s, const ExpandedGraph& graph, const Instance& instance) {
  double total = 0.0;
  for (size_t h = 0; h < s.y.size(); ++h) total += instance.design_cost(instance.network.routes[h]) * s.y[h];
  for (const auto& [r, arcs] : s.paths) {
    double c = 0.0;
    for (int a : arcs) c += graph.arcs[a].cost;
    total += instance.requests[r].demand * c;
  }
  for (int r : s.rejected) total += instance.requests[r].demand * graph.arcs[graph.dummy[r]].cost;
  return total;
}

Solution solution_from_master(const MasterState& master, std::span<const double> values) {
  const ExpandedGraph& graph = master.graph();
  const Instance& instance = master.instance();
  Solution s;
  for (size_t h = 0; h < instance.network.routes.size(); ++h)
    s.y.push_back(static_cast<int>(std::lround(values[master.y_var(static_cast<int>(h))])));
  for (int a : graph.arcs_of(ArcClass::Segment)) {
    const long units = std::lround(values[master.x_var(a)]);
    if (units > 0) s.x[a] = static_cast<int>(units);
  }
  s.g.assign(instance.requests.size(), {});
  for (size_t r = 0; r < instance.requests.size(); ++r) {
    const int ri = static_cast<int>(r);
    for (size_t p = 0; p < graph.passenger_paths[r].size(); ++p)
      s.g[r].push_back(std::max(0.0, values[master.g_var(ri, static_cast<int>(p))]));
    if (!instance.requests[r].is_freight()) continue;
    // Cheapest column in use; on integral solutions this is the unique one.
    int chosen = -1;
    for (int c : master.columns_of(ri)) {
      if (values[master.column_var(c)] <= 1e-6) continue;
      if (chosen < 0 || master.columns()[c].cost < master.columns()[chosen].cost) chosen = c;
    }
    if (chosen < 0) throw std::logic_error(fmt::format("request {} has no column in use", instance.requests[r].id));
    const Column& col = master.columns()[chosen];
    if (col.arcs.size() == 1 && col.arcs[0] == graph.dummy[r])
      s.rejected.push_back(ri);
    else
      s.paths[ri] = col.arcs;
  }
  s.objective = evaluate_objective(s, graph, instance);
  s.columns = static_cast<int>(master.columns().size());
  return s;
}

std::optional<Solution> all_rejected(const MasterState& master) {
  const ExpandedGraph& graph = master.graph();
  const Instance& instance = master.instance();
  std::vector<double> lower = master.lower_bounds();
  std::vector<double> upper = master.upper_bounds();
  for (size_t h = 0; h < instance.network.routes.size(); ++h) upper[master.y_var(static_cast<int>(h))] = 0.0;
  for (int a : graph.arcs_of(ArcClass::Segment)) upper[master.x_var(a)] = 0.0;
  for (size_t c = 0; c < master.columns().size(); ++c) {
    const Column& col = master.columns()[c];
    const bool dummy = col.arcs.size() == 1 && col.arcs[0] == graph.dummy[col.request];
    if (!dummy) upper[master.column_var(static_cast<int>(c))] = 0.0;
  }
  const lp::BoundOverride bounds{lower, upper};
  const lp::LpSolution sol = lp::solve_lp(master.lp(), {}, nullptr, &bounds);
  if (sol.status != lp::LpStatus::Optimal) return std::nullopt;
  Solution s = solution_from_master(master, sol.values);
  return s;
}

std::vector<double> master_point(const MasterState& master, const Solution& s) {
  const ExpandedGraph& graph = master.graph();
  std::vector<double> v(master.lp().num_variables(), 0.0);
  for (size_t h = 0; h < s.y.size(); ++h) v[master.y_var(static_cast<int>(h))] = s.y[h];
  for (const auto& [a, units] : s.x) v[master.x_var(a)] = units;
  for (size_t r = 0; r < s.g.size(); ++r)
    for (size_t p = 0; p < s.g[r].size(); ++p) v[master.g_var(static_cast<int>(r), static_cast<int>(p))] = s.g[r][p];
  auto select = [&](int r, std::vector<int> arcs) {
    std::sort(arcs.begin(), arcs.end());
    for (int c : master.columns_of(r))
      if (master.columns()[c].key() == arcs) {
        v[master.column_var(c)] = 1.0;
        return;
      }
    throw std::logic_error("solution path is not in the column pool");
  };
  for (const auto& [r, arcs] : s.paths) select(r, arcs);
  for (int r : s.rejected) select(r, {graph.dummy[r]});
  return v;
}

std::string gap_status(double gap, double epsilon, bool out_of_time) {
  if (gap <= epsilon) return "optimal";
  return out_of_time ? "time_limit" : "feasible";
}

namespace {

nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string solution_json(const Solution& s, const ExpandedGraph& graph, const Instance& instance) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["algorithm"] = s.algorithm;
  j["status"] = s.status;
  j["objective"] = number_or_null(s.objective);
  j["lower_bound"] = number_or_null(s.lower_bound);
  j["gap"] = number_or_null(s.gap);
  ordered_json y = ordered_json::object();
  for (size_t h = 0; h < s.y.size(); ++h) y[instance.network.routes[h].id] = s.y[h];
  j["y"] = y;
  ordered_json x = ordered_json::array();
  for (const auto& [a, units] : s.x) x.push_back({{"segment", graph.arc_key(instance, a)}, {"count", units}});
  j["x"] = x;
  ordered_json accepted = ordered_json::array();
  for (const auto& [r, arcs] : s.paths) {
    ordered_json path = ordered_json::array();
    for (int a : arcs) path.push_back(graph.arc_key(instance, a));
    accepted.push_back({{"request", instance.requests[r].id}, {"path", path}});
  }
  j["accepted"] = accepted;
  ordered_json rejected = ordered_json::array();
  for (int r : s.rejected) rejected.push_back(instance.requests[r].id);
  j["rejected"] = rejected;
  ordered_json flows = ordered_json::array();
  for (size_t r = 0; r < s.g.size(); ++r)
    for (size_t p = 0; p < s.g[r].size(); ++p)
      if (s.g[r][p] > 1e-9) flows.push_back({{"request", instance.requests[r].id}, {"path", p}, {"fraction", s.g[r][p]}});
  j["passenger_flows"] = flows;
  ordered_json log = ordered_json::array();
  for (const LogEntry& e : s.log)
    log.push_back({{"ub", number_or_null(e.ub)}, {"lb", number_or_null(e.lb)}, {"cols", e.cols}, {"time", e.time}});
  j["log"] = log;
  j["nodes"] = s.nodes;
  j["columns"] = s.columns;
  j["wall_time"] = s.wall_time;
  return j.dump(2) + "\n";
}

Solution parse_solution(std::string_view json_text, const ExpandedGraph& graph, const Instance& instance) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError("solution", "solution file", e.what());
  }
  std::map<std::string, int> arc_ids, request_ids, vehicle_ids;
  for (int a = 0; a < graph.num_arcs(); ++a) arc_ids[graph.arc_key(instance, a)] = a;
  for (size_t r = 0; r < instance.requests.size(); ++r) request_ids[instance.requests[r].id] = static_cast<int>(r);
  for (size_t h = 0; h < instance.network.routes.size(); ++h)
    vehicle_ids[instance.network.routes[h].id] = static_cast<int>(h);
  auto lookup = [](const std::map<std::string, int>& ids, const std::string& key, const char* field) {
    auto it = ids.find(key);
    if (it == ids.end()) throw ValidationError(field, key, "unknown identifier in solution");
    return it->second;
  };
  auto number = [&](const char* key) {
    return j.contains(key) && j[key].is_number() ? j[key].get<double>() : lp::kInfinity;
  };
  Solution s;
  try {
    s.algorithm = j.value("algorithm", "");
    s.status = j.value("status", "");
    s.objective = number("objective");
    s.lower_bound = j.contains("lower_bound") && j["lower_bound"].is_number() ? j["lower_bound"].get<double>() : -lp::kInfinity;
    s.gap = number("gap");
    s.y.assign(instance.network.routes.size(), 0);
    for (const auto& [vehicle, count] : j.at("y").items()) s.y[lookup(vehicle_ids, vehicle, "y")] = count.get<int>();
    for (const auto& e : j.at("x")) s.x[lookup(arc_ids, e.at("segment").get<std::string>(), "x")] = e.at("count").get<int>();
    for (const auto& e : j.at("accepted")) {
      std::vector<int> path;
      for (const auto& key : e.at("path")) path.push_back(lookup(arc_ids, key.get<std::string>(), "accepted"));
      s.paths[lookup(request_ids, e.at("request").get<std::string>(), "accepted")] = std::move(path);
    }
    for (const auto& id : j.at("rejected")) s.rejected.push_back(lookup(request_ids, id.get<std::string>(), "rejected"));
    s.g.assign(instance.requests.size(), {});
    for (size_t r = 0; r < instance.requests.size(); ++r) s.g[r].assign(graph.passenger_paths[r].size(), 0.0);
    for (const auto& e : j.at("passenger_flows")) {
      const int r = lookup(request_ids, e.at("request").get<std::string>(), "passenger_flows");
      const size_t p = e.at("path").get<size_t>();
      if (p >= s.g[r].size()) throw ValidationError("passenger_flows", instance.requests[r].id, "path index out of range");
      s.g[r][p] = e.at("fraction").get<double>();
    }
    s.nodes = j.value("nodes", 0);
    s.columns = j.value("columns", 0);
    s.wall_time = j.value("wall_time", 0.0);
  } catch (const json::exception& e) {
    throw ValidationError("solution", "solution file", e.what());
  }
  return s;
}

std::string log_csv(const Solution& s) {
  std::string out = "iteration,ub,lb,cols,time\n";
  auto num = [](double v) { return std::isfinite(v) ? fmt::format("{:.10g}", v) : std::string(v > 0 ? "inf" : "-inf"); };
  for (size_t i = 0; i < s.log.size(); ++i) {
    const LogEntry& e = s.log[i];
    out += fmt::format("{},{},{},{},{:.3f}\n", i + 1, num(e.ub), num(e.lb), e.cols, e.time);
  }
  return out;
}

}  // namespace cargohitch
