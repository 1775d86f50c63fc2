#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "cargohitch/model.hpp"

namespace cargohitch {

ValidationError::ValidationError(std::string field, std::string record, const std::string& message)
    : std::runtime_error(fmt::format("{}: {} ({})", record, message, field)),
      field_(std::move(field)),
      record_(std::move(record)) {}

double euclidean(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

int Network::find_stop(std::string_view id) const {
  for (size_t i = 0; i < stops.size(); ++i)
    if (stops[i].id == id) return static_cast<int>(i);
  return -1;
}

bool Network::is_terminal(int stop) const { return std::binary_search(terminals.begin(), terminals.end(), stop); }

double Network::distance_km(int a, int b) const {
  if (a == b) return 0.0;
  const auto it = distance_table.find({std::min(a, b), std::max(a, b)});
  if (it != distance_table.end()) return it->second;
  return euclidean(stops[a].position, stops[b].position) / 1000.0;
}

int Instance::zeta(const Request& r, const Point& endpoint, int terminal) const {
  if (r.zeta) return *r.zeta;
  if (params.zeta_default) return *params.zeta_default;
  const double d = euclidean(endpoint, network.stops[terminal].position);
  return static_cast<int>(std::ceil(d / params.freight_speed - 1e-9));
}

int Instance::num_freight() const {
  return static_cast<int>(std::count_if(requests.begin(), requests.end(), [](const Request& r) { return r.is_freight(); }));
}

int Instance::num_passenger() const { return static_cast<int>(requests.size()) - num_freight(); }

namespace {

std::string route_record(const VehicleRoute& v) { return fmt::format("route '{}'", v.id); }
std::string request_record(const Request& r) { return fmt::format("request '{}'", r.id); }

}  // namespace

void validate(const Network& network) {
  std::set<std::string> ids;
  for (const Stop& s : network.stops) {
    if (s.id.empty()) throw ValidationError("id", "stop", "stop id must not be empty");
    if (!ids.insert(s.id).second) throw ValidationError("id", fmt::format("stop '{}'", s.id), "duplicate stop id");
    if (!std::isfinite(s.position.x) || !std::isfinite(s.position.y))
      throw ValidationError("x/y", fmt::format("stop '{}'", s.id), "coordinates must be finite");
  }
  const int n = static_cast<int>(network.stops.size());
  if (!std::is_sorted(network.terminals.begin(), network.terminals.end()) ||
      std::adjacent_find(network.terminals.begin(), network.terminals.end()) != network.terminals.end())
    throw ValidationError("terminals", "network", "terminal list must be sorted and unique");
  for (int t : network.terminals)
    if (t < 0 || t >= n) throw ValidationError("terminals", "network", "terminal references an unknown stop");
  for (const auto& [key, km] : network.distance_table) {
    if (key.first < 0 || key.second >= n || key.first >= key.second)
      throw ValidationError("distances", "network", "distance entry references unknown or identical stops");
    if (!(km > 0.0) || !std::isfinite(km))
      throw ValidationError("km", fmt::format("distance {}-{}", network.stops[key.first].id, network.stops[key.second].id),
                            "distance between different stops must be positive");
  }
  std::set<std::string> route_ids;
  for (const VehicleRoute& v : network.routes) {
    const std::string rec = route_record(v);
    if (!route_ids.insert(v.id).second) throw ValidationError("id", rec, "duplicate route id");
    if (v.stops.size() < 2) throw ValidationError("stops", rec, "a route needs at least two stops");
    if (v.units < 1) throw ValidationError("units", rec, "unit count must be at least 1");
    if (!(v.unit_capacity > 0.0)) throw ValidationError("unit_capacity", rec, "unit capacity must be positive");
    if (v.design_cost && !(*v.design_cost > 0.0)) throw ValidationError("design_cost", rec, "design cost must be positive");
    int terminals = 0;
    for (size_t i = 0; i < v.stops.size(); ++i) {
      const RouteStop& rs = v.stops[i];
      if (rs.stop < 0 || rs.stop >= n) throw ValidationError("stops", rec, "route references an unknown stop");
      if (i > 0 && rs.time <= v.stops[i - 1].time)
        throw ValidationError("time", rec, "arrival times must be strictly increasing");
      if (i > 0 && rs.stop == v.stops[i - 1].stop)
        throw ValidationError("stops", rec, "consecutive stops must differ");
      if (network.is_terminal(rs.stop)) ++terminals;
    }
    if (terminals == 1)
      throw ValidationError("stops", rec, "a route must visit either zero or at least two freight terminals");
  }
}

void validate(const Instance& instance) {
  validate(instance.network);
  const Params& p = instance.params;
  if (!(p.chi >= 0.0 && p.chi <= 1.0)) throw ValidationError("chi", "params", "service level must lie in [0, 1]");
  if (p.k < 1) throw ValidationError("k", "params", "passenger path count must be at least 1");
  if (p.iota < 1) throw ValidationError("iota", "params", "terminal fan-out must be at least 1");
  if (p.zeta_default && *p.zeta_default < 0) throw ValidationError("zeta_default", "params", "zeta must be nonnegative");
  if (!(p.walk_speed > 0.0)) throw ValidationError("walk_speed", "params", "walk speed must be positive");
  if (!(p.freight_speed > 0.0)) throw ValidationError("freight_speed", "params", "freight speed must be positive");
  const CostModel& c = instance.costs;
  if (!(c.design_cost > 0.0)) throw ValidationError("design_cost", "costs", "design cost must be positive");
  if (!(c.penalty_per_unit > 0.0)) throw ValidationError("penalty_per_unit", "costs", "penalty must be positive");
  if (!(c.routing_rate > 0.0)) throw ValidationError("routing_rate", "costs", "routing rate must be positive");
  if (c.transit_cost < 0.0 || c.egress_cost < 0.0 || c.access_cost < 0.0)
    throw ValidationError("costs", "costs", "arc costs must be nonnegative");
  std::set<std::string> ids;
  for (const Request& r : instance.requests) {
    const std::string rec = request_record(r);
    if (r.id.empty()) throw ValidationError("id", "request", "request id must not be empty");
    if (!ids.insert(r.id).second) throw ValidationError("id", rec, "duplicate request id");
    if (!(r.demand > 0.0)) throw ValidationError("demand", rec, "demand must be positive");
    if (r.earliest >= r.latest) throw ValidationError("latest", rec, "earliest start must precede latest completion");
    if (r.zeta && *r.zeta < 0) throw ValidationError("zeta", rec, "zeta must be nonnegative");
    if (r.penalty && !(*r.penalty > 0.0)) throw ValidationError("penalty", rec, "penalty must be positive");
  }
  for (const VehicleRoute& v : instance.network.routes)
    for (size_t i = 1; i < v.stops.size(); ++i)
      if (!(instance.network.distance_km(v.stops[i - 1].stop, v.stops[i].stop) > 0.0))
        throw ValidationError("stops", route_record(v), "consecutive stops must be a positive distance apart");
}

}  // namespace cargohitch
