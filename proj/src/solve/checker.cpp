#include <cmath>
#include <set>

#include <fmt/format.h>

#include "cargohitch/solve.hpp"

namespace cargohitch {

namespace {
constexpr double kTol = 1e-6;
}

std::vector<std::string> check_solution(const Solution& s, const ExpandedGraph& graph, const Instance& instance) {
  std::vector<std::string> issues;
  auto fail = [&](std::string msg) { issues.push_back(std::move(msg)); };
  const auto& routes = instance.network.routes;
  const int nr = static_cast<int>(instance.requests.size());

  // Design: 0 <= y_h <= units, x_mu <= y_h.
  if (s.y.size() != routes.size()) fail(fmt::format("y has {} entries for {} vehicles", s.y.size(), routes.size()));
  for (size_t h = 0; h < s.y.size() && h < routes.size(); ++h)
    if (s.y[h] < 0 || s.y[h] > routes[h].units)
      fail(fmt::format("vehicle {}: y = {} outside [0, {}]", routes[h].id, s.y[h], routes[h].units));
  for (const auto& [a, units] : s.x) {
    if (a < 0 || a >= graph.num_arcs() || graph.arcs[a].cls != ArcClass::Segment) {
      fail(fmt::format("x refers to arc {} which is not a freight segment", a));
      continue;
    }
    const int h = graph.arcs[a].vehicle;
    if (units < 0) fail(fmt::format("segment {}: negative x", graph.arc_key(instance, a)));
    if (static_cast<size_t>(h) < s.y.size() && units > s.y[h])
      fail(fmt::format("segment {}: x = {} exceeds y = {}", graph.arc_key(instance, a), units, s.y[h]));
  }
  auto units_on = [&](int a) {
    auto it = s.x.find(a);
    return it == s.x.end() ? 0 : it->second;
  };

  // Freight: accepted and rejected partition the freight requests, and each
  // accepted path is a time-respecting walk from origin to destination.
  std::set<int> seen;
  for (int r : s.rejected) {
    if (r < 0 || r >= nr || !instance.requests[r].is_freight()) fail(fmt::format("rejected entry {} is not freight", r));
    if (!seen.insert(r).second) fail(fmt::format("request {} listed twice", r));
  }
  std::vector<double> freight_load(graph.num_arcs(), 0.0);
  for (const auto& [r, arcs] : s.paths) {
    if (r < 0 || r >= nr || !instance.requests[r].is_freight()) {
      fail(fmt::format("accepted entry {} is not freight", r));
      continue;
    }
    const std::string& id = instance.requests[r].id;
    if (!seen.insert(r).second) fail(fmt::format("request {} both accepted and rejected", id));
    if (arcs.empty()) {
      fail(fmt::format("request {}: empty path", id));
      continue;
    }
    int at = graph.origin[r];
    std::set<int> used;
    for (int a : arcs) {
      const Arc& arc = graph.arcs[a];
      if (!graph.arc_alive[a] || !graph.in_freight[a]) fail(fmt::format("request {}: arc {} not usable by freight", id, a));
      if (arc.cls == ArcClass::Dummy) fail(fmt::format("request {}: accepted path uses the dummy arc", id));
      if (arc.request >= 0 && arc.request != r) fail(fmt::format("request {}: uses an arc of another request", id));
      if (arc.tail != at) fail(fmt::format("request {}: path breaks at arc {}", id, graph.arc_key(instance, a)));
      if (graph.vertices[arc.head].time < graph.vertices[arc.tail].time)
        fail(fmt::format("request {}: arc {} goes back in time", id, graph.arc_key(instance, a)));
      if (!used.insert(a).second) fail(fmt::format("request {}: arc repeated", id));
      if (arc.cls == ArcClass::Segment) freight_load[a] += instance.requests[r].demand;
      at = arc.head;
    }
    if (at != graph.destination[r]) fail(fmt::format("request {}: path does not reach the destination", id));
    const Vertex& o = graph.vertices[graph.origin[r]];
    const Vertex& d = graph.vertices[graph.destination[r]];
    if (o.time < instance.requests[r].earliest || d.time > instance.requests[r].latest)
      fail(fmt::format("request {}: path outside its time window", id));
  }
  for (int r = 0; r < nr; ++r)
    if (instance.requests[r].is_freight() && !seen.count(r))
      fail(fmt::format("request {} neither accepted nor rejected", instance.requests[r].id));

  // Freight capacity of each segment: sum of q <= lambda * x.
  for (int a = 0; a < graph.num_arcs(); ++a) {
    if (freight_load[a] <= 0.0) continue;
    const VehicleRoute& v = routes[graph.arcs[a].vehicle];
    const double cap = v.unit_capacity * units_on(a);
    if (freight_load[a] > cap + kTol * std::max(1.0, cap))
      fail(fmt::format("segment {}: freight load {} exceeds {}", graph.arc_key(instance, a), freight_load[a], cap));
  }

  // Passengers: convexity, service level and vehicle capacity net of the
  // units given to freight.
  std::vector<double> passenger_load(graph.num_arcs(), 0.0);
  double served = 0.0, demand = 0.0;
  for (int r = 0; r < nr; ++r) {
    const Request& req = instance.requests[r];
    if (req.is_freight()) continue;
    demand += req.demand;
    const std::vector<double> none;
    const auto& g = static_cast<size_t>(r) < s.g.size() ? s.g[r] : none;
    if (g.size() > graph.passenger_paths[r].size()) fail(fmt::format("request {}: too many path flows", req.id));
    double total = 0.0;
    for (size_t p = 0; p < g.size() && p < graph.passenger_paths[r].size(); ++p) {
      if (g[p] < -kTol) fail(fmt::format("request {}: negative flow", req.id));
      total += g[p];
      for (int a : graph.passenger_paths[r][p].vehicle_arcs) passenger_load[a] += req.demand * g[p];
    }
    if (total > 1.0 + kTol) fail(fmt::format("request {}: flow {} above 1", req.id, total));
    served += req.demand * total;
  }
  const double required = instance.params.chi * demand;
  if (served < required - kTol * std::max(1.0, required))
    fail(fmt::format("service level {} below {}", served, required));
  for (int a = 0; a < graph.num_arcs(); ++a) {
    if (graph.arcs[a].cls != ArcClass::Vehicle || passenger_load[a] <= 0.0) continue;
    const VehicleRoute& v = routes[graph.arcs[a].vehicle];
    const int taken = graph.segment_of[a] >= 0 ? units_on(graph.segment_of[a]) : 0;
    const double cap = v.unit_capacity * (v.units - taken);
    if (passenger_load[a] > cap + kTol * std::max(1.0, cap))
      fail(fmt::format("vehicle arc {}: passenger load {} exceeds {}", graph.arc_key(instance, a), passenger_load[a], cap));
  }

  if (std::isfinite(s.objective)) {
    const double obj = evaluate_objective(s, graph, instance);
    if (std::abs(obj - s.objective) > kTol * std::max(1.0, std::abs(obj)))
      fail(fmt::format("reported objective {} differs from recomputed {}", s.objective, obj));
  }
  if (std::isfinite(s.objective) && std::isfinite(s.lower_bound) &&
      s.lower_bound > s.objective + kTol * std::max(1.0, std::abs(s.objective)))
    fail(fmt::format("lower bound {} above objective {}", s.lower_bound, s.objective));
  return issues;
}

}  // namespace cargohitch
