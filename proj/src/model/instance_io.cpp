#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "cargohitch/model.hpp"

namespace cargohitch {

using Json = nlohmann::ordered_json;

namespace {

// Reads obj[key] as T, reporting the key and record on type errors.
template <class T>
T get(const Json& obj, const char* key, const std::string& record) {
  if (!obj.is_object() || !obj.contains(key)) throw ValidationError(key, record, "missing required field");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(key, record, "field has the wrong type");
  }
}

template <class T>
std::optional<T> get_optional(const Json& obj, const char* key, const std::string& record) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return get<T>(obj, key, record);
}

template <class T>
T get_or(const Json& obj, const char* key, const std::string& record, T fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return get<T>(obj, key, record);
}

const Json& require_array(const Json& obj, const char* key, const std::string& record) {
  if (!obj.contains(key)) throw ValidationError(key, record, "missing required field");
  const Json& v = obj.at(key);
  if (!v.is_array()) throw ValidationError(key, record, "expected an array");
  return v;
}

Point get_point(const Json& obj, const char* key, const std::string& record) {
  if (!obj.contains(key) || !obj.at(key).is_object()) throw ValidationError(key, record, "expected an {x, y} object");
  const Json& p = obj.at(key);
  return {get<double>(p, "x", record), get<double>(p, "y", record)};
}

Network parse_network(const Json& j) {
  Network net;
  const std::string rec = "network";
  for (size_t i = 0; i < require_array(j, "stops", rec).size(); ++i) {
    const Json& s = j["stops"][i];
    const std::string srec = fmt::format("stops[{}]", i);
    net.stops.push_back({get<std::string>(s, "id", srec), {get<double>(s, "x", srec), get<double>(s, "y", srec)}});
  }
  auto stop_index = [&](const std::string& id, const char* field, const std::string& record) {
    const int idx = net.find_stop(id);
    if (idx < 0) throw ValidationError(field, record, fmt::format("unknown stop '{}'", id));
    return idx;
  };
  for (const Json& t : require_array(j, "terminals", rec)) {
    if (!t.is_string()) throw ValidationError("terminals", rec, "terminal entries must be stop ids");
    net.terminals.push_back(stop_index(t.get<std::string>(), "terminals", rec));
  }
  std::sort(net.terminals.begin(), net.terminals.end());
  for (size_t i = 0; i < require_array(j, "routes", rec).size(); ++i) {
    const Json& r = j["routes"][i];
    VehicleRoute v;
    v.id = get<std::string>(r, "id", fmt::format("routes[{}]", i));
    const std::string rrec = fmt::format("route '{}'", v.id);
    v.units = get<int>(r, "units", rrec);
    v.unit_capacity = get<double>(r, "unit_capacity", rrec);
    v.design_cost = get_optional<double>(r, "design_cost", rrec);
    for (const Json& s : require_array(r, "stops", rrec))
      v.stops.push_back({stop_index(get<std::string>(s, "stop", rrec), "stop", rrec), get<int>(s, "time", rrec)});
    net.routes.push_back(std::move(v));
  }
  if (j.contains("distances")) {
    for (const Json& d : require_array(j, "distances", rec)) {
      const int a = stop_index(get<std::string>(d, "from", "distances"), "from", "distances");
      const int b = stop_index(get<std::string>(d, "to", "distances"), "to", "distances");
      net.distance_table[{std::min(a, b), std::max(a, b)}] = get<double>(d, "km", "distances");
    }
  }
  return net;
}

Request parse_request(const Json& j, size_t index) {
  Request r;
  r.id = get<std::string>(j, "id", fmt::format("requests[{}]", index));
  const std::string rec = fmt::format("request '{}'", r.id);
  const auto kind = get<std::string>(j, "kind", rec);
  if (kind == "passenger") r.kind = RequestKind::Passenger;
  else if (kind == "freight") r.kind = RequestKind::Freight;
  else throw ValidationError("kind", rec, "kind must be 'passenger' or 'freight'");
  r.origin = get_point(j, "origin", rec);
  r.destination = get_point(j, "destination", rec);
  r.demand = get<double>(j, "demand", rec);
  r.earliest = get<int>(j, "earliest", rec);
  r.latest = get<int>(j, "latest", rec);
  r.zeta = get_optional<int>(j, "zeta", rec);
  r.penalty = get_optional<double>(j, "penalty", rec);
  return r;
}

Json point_json(const Point& p) { return Json{{"x", p.x}, {"y", p.y}}; }

}  // namespace

Instance parse_instance(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("json", "file", fmt::format("not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw ValidationError("json", "file", "top level must be an object");
  Instance inst;
  if (!j.contains("network")) throw ValidationError("network", "file", "missing required field");
  inst.network = parse_network(j["network"]);
  for (size_t i = 0; i < require_array(j, "requests", "file").size(); ++i)
    inst.requests.push_back(parse_request(j["requests"][i], i));
  if (j.contains("costs")) {
    const Json& c = j["costs"];
    CostModel& m = inst.costs;
    m.design_cost = get_or(c, "design_cost", "costs", m.design_cost);
    m.penalty_per_unit = get_or(c, "penalty_per_unit", "costs", m.penalty_per_unit);
    m.routing_rate = get_or(c, "routing_rate", "costs", m.routing_rate);
    m.transit_cost = get_or(c, "transit_cost", "costs", m.transit_cost);
    m.egress_cost = get_or(c, "egress_cost", "costs", m.egress_cost);
    m.access_cost = get_or(c, "access_cost", "costs", m.access_cost);
  }
  if (j.contains("params")) {
    const Json& p = j["params"];
    Params& q = inst.params;
    q.chi = get_or(p, "chi", "params", q.chi);
    q.k = get_or(p, "k", "params", q.k);
    q.iota = get_or(p, "iota", "params", q.iota);
    q.zeta_default = get_optional<int>(p, "zeta_default", "params");
    q.walk_speed = get_or(p, "walk_speed", "params", q.walk_speed);
    q.freight_speed = get_or(p, "freight_speed", "params", q.freight_speed);
  }
  validate(inst);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("path", path, "cannot open instance file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string dump_instance(const Instance& inst) {
  const Network& net = inst.network;
  Json stops = Json::array();
  for (const Stop& s : net.stops) stops.push_back({{"id", s.id}, {"x", s.position.x}, {"y", s.position.y}});
  Json terminals = Json::array();
  for (int t : net.terminals) terminals.push_back(net.stops[t].id);
  Json routes = Json::array();
  for (const VehicleRoute& v : net.routes) {
    Json r{{"id", v.id}, {"units", v.units}, {"unit_capacity", v.unit_capacity}};
    if (v.design_cost) r["design_cost"] = *v.design_cost;
    Json seq = Json::array();
    for (const RouteStop& s : v.stops) seq.push_back({{"stop", net.stops[s.stop].id}, {"time", s.time}});
    r["stops"] = std::move(seq);
    routes.push_back(std::move(r));
  }
  Json network{{"stops", std::move(stops)}, {"terminals", std::move(terminals)}, {"routes", std::move(routes)}};
  if (!net.distance_table.empty()) {
    Json d = Json::array();
    for (const auto& [key, km] : net.distance_table)
      d.push_back({{"from", net.stops[key.first].id}, {"to", net.stops[key.second].id}, {"km", km}});
    network["distances"] = std::move(d);
  }
  Json requests = Json::array();
  for (const Request& r : inst.requests) {
    Json q{{"id", r.id},
           {"kind", r.is_freight() ? "freight" : "passenger"},
           {"origin", point_json(r.origin)},
           {"destination", point_json(r.destination)},
           {"demand", r.demand},
           {"earliest", r.earliest},
           {"latest", r.latest}};
    if (r.zeta) q["zeta"] = *r.zeta;
    if (r.penalty) q["penalty"] = *r.penalty;
    requests.push_back(std::move(q));
  }
  const CostModel& c = inst.costs;
  const Params& p = inst.params;
  Json params{{"chi", p.chi}, {"k", p.k}, {"iota", p.iota}};
  if (p.zeta_default) params["zeta_default"] = *p.zeta_default;
  params["walk_speed"] = p.walk_speed;
  params["freight_speed"] = p.freight_speed;
  Json out{{"network", std::move(network)},
           {"requests", std::move(requests)},
           {"costs",
            {{"design_cost", c.design_cost},
             {"penalty_per_unit", c.penalty_per_unit},
             {"routing_rate", c.routing_rate},
             {"transit_cost", c.transit_cost},
             {"egress_cost", c.egress_cost},
             {"access_cost", c.access_cost}}},
           {"params", std::move(params)}};
  return out.dump(2) + "\n";
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("path", path, "cannot write instance file");
  out << dump_instance(instance);
}

}  // namespace cargohitch
