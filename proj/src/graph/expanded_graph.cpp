#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "cargohitch/graph.hpp"

namespace cargohitch {

const char* to_string(ArcClass cls) {
  switch (cls) {
    case ArcClass::Vehicle: return "V";
    case ArcClass::Holding: return "0";
    case ArcClass::Transit: return "T";
    case ArcClass::Access: return "A";
    case ArcClass::Egress: return "E";
    case ArcClass::Dummy: return "D";
    case ArcClass::Segment: return "F";
  }
  return "?";
}

int ExpandedGraph::find_vertex(int stop, int time, int layer) const {
  const auto it = stop_index.find({stop, time, layer});
  return it == stop_index.end() ? -1 : it->second;
}

std::string ExpandedGraph::vertex_key(const Instance& instance, int v) const {
  const Vertex& x = vertices[v];
  switch (x.kind) {
    case VertexKind::Origin: return fmt::format("o:{}@{}", instance.requests[x.request].id, x.time);
    case VertexKind::Destination: return fmt::format("d:{}@{}", instance.requests[x.request].id, x.time);
    case VertexKind::Stop: break;
  }
  return fmt::format("{}@{}@{}", instance.network.stops[x.stop].id, x.time, x.layer);
}

std::string ExpandedGraph::arc_key(const Instance& instance, int a) const {
  return fmt::format("{}:{}>{}", to_string(arcs[a].cls), vertex_key(instance, arcs[a].tail),
                     vertex_key(instance, arcs[a].head));
}

std::string ExpandedGraph::to_json(const Instance& instance) const {
  using Json = nlohmann::ordered_json;
  Json vs = Json::array();
  for (int v = 0; v < num_vertices(); ++v) vs.push_back(vertex_key(instance, v));
  Json as = Json::array();
  for (int a = 0; a < num_arcs(); ++a) {
    Json arc{{"key", arc_key(instance, a)}, {"class", to_string(arcs[a].cls)}, {"cost", arcs[a].cost}};
    if (arcs[a].vehicle >= 0) arc["vehicle"] = instance.network.routes[arcs[a].vehicle].id;
    if (arcs[a].request >= 0) arc["request"] = instance.requests[arcs[a].request].id;
    if (segment_of[a] >= 0) arc["segment"] = arc_key(instance, segment_of[a]);
    as.push_back(std::move(arc));
  }
  return Json{{"vertices", std::move(vs)}, {"arcs", std::move(as)}}.dump(2) + "\n";
}

namespace {

int add_vertex(ExpandedGraph& g, const Vertex& v) {
  g.vertices.push_back(v);
  g.vertex_alive.push_back(1);
  const int id = g.num_vertices() - 1;
  if (v.kind == VertexKind::Stop) g.stop_index[{v.stop, v.time, v.layer}] = id;
  return id;
}

int add_arc(ExpandedGraph& g, const Arc& a) {
  g.arcs.push_back(a);
  g.arc_alive.push_back(1);
  g.segment_of.push_back(-1);
  g.contracted.emplace_back();
  return g.num_arcs() - 1;
}

void require_not_finalized(const ExpandedGraph& g, const char* stage) {
  if (g.finalized) throw std::logic_error(fmt::format("{} called on a finalized graph", stage));
}

}  // namespace

ExpandedGraph expand(const Instance& instance) {
  const Network& net = instance.network;
  const CostModel& costs = instance.costs;
  ExpandedGraph g;

  // Vehicle layers.
  std::set<std::pair<int, int>> arrivals;  // (stop, time)
  for (size_t h = 0; h < net.routes.size(); ++h) {
    const VehicleRoute& r = net.routes[h];
    int prev = -1;
    for (size_t l = 0; l < r.stops.size(); ++l) {
      const RouteStop& rs = r.stops[l];
      const int v = add_vertex(g, {VertexKind::Stop, -1, rs.stop, rs.time, static_cast<int>(h) + 1});
      arrivals.insert({rs.stop, rs.time});
      if (prev >= 0) {
        const double km = net.distance_km(r.stops[l - 1].stop, rs.stop);
        add_arc(g, {prev, v, ArcClass::Vehicle, costs.routing_rate * km, static_cast<int>(h), -1});
      }
      prev = v;
    }
  }
  const int num_vehicle_vertices = g.num_vertices();

  // Holding layer: one vertex per (stop, arrival time), consecutive times linked.
  int prev_stop = -1, prev_vertex = -1;
  for (const auto& [stop, time] : arrivals) {
    const int v = add_vertex(g, {VertexKind::Stop, -1, stop, time, 0});
    if (stop == prev_stop) add_arc(g, {prev_vertex, v, ArcClass::Holding, 0.0, -1, -1});
    prev_stop = stop;
    prev_vertex = v;
  }

  // Transit arcs in both directions between each vehicle vertex and its
  // holding representation.
  for (int v = 0; v < num_vehicle_vertices; ++v) {
    const Vertex& x = g.vertices[v];
    const int hold = g.find_vertex(x.stop, x.time, 0);
    add_arc(g, {v, hold, ArcClass::Transit, costs.transit_cost, -1, -1});
    add_arc(g, {hold, v, ArcClass::Transit, costs.transit_cost, -1, -1});
  }

  // Request endpoints with access/egress arcs.
  const int nr = static_cast<int>(instance.requests.size());
  g.origin.assign(nr, -1);
  g.destination.assign(nr, -1);
  g.dummy.assign(nr, -1);
  g.passenger_paths.assign(nr, {});
  for (int r = 0; r < nr; ++r) {
    const Request& req = instance.requests[r];
    g.origin[r] = add_vertex(g, {VertexKind::Origin, r, -1, req.earliest, 0});
    g.destination[r] = add_vertex(g, {VertexKind::Destination, r, -1, req.latest, 0});
  }
  for (int r = 0; r < nr; ++r) {
    const Request& req = instance.requests[r];
    for (const auto& [stop, time] : arrivals) {
      const int hold = g.find_vertex(stop, time, 0);
      const Point& at = net.stops[stop].position;
      if (req.is_freight()) {
        if (!net.is_terminal(stop)) continue;
        if (time >= req.earliest) add_arc(g, {g.origin[r], hold, ArcClass::Access, costs.access_cost, -1, r});
        if (time <= req.latest) add_arc(g, {hold, g.destination[r], ArcClass::Egress, costs.egress_cost, -1, r});
      } else {
        const double walk_in = euclidean(req.origin, at) / instance.params.walk_speed;
        const double walk_out = euclidean(at, req.destination) / instance.params.walk_speed;
        if (req.earliest + walk_in <= time) add_arc(g, {g.origin[r], hold, ArcClass::Access, 0.0, -1, r});
        if (time + walk_out <= req.latest) add_arc(g, {hold, g.destination[r], ArcClass::Egress, 0.0, -1, r});
      }
    }
  }
  return g;
}

void add_dummy_arcs(ExpandedGraph& g, const Instance& instance) {
  require_not_finalized(g, "add_dummy_arcs");
  for (size_t r = 0; r < instance.requests.size(); ++r) {
    const Request& req = instance.requests[r];
    if (!req.is_freight() || g.dummy[r] >= 0) continue;
    g.dummy[r] = add_arc(g, {g.origin[r], g.destination[r], ArcClass::Dummy, instance.penalty(req) / req.demand, -1,
                             static_cast<int>(r)});
  }
}

void contract_segments(ExpandedGraph& g, const Instance& instance) {
  require_not_finalized(g, "contract_segments");
  const Network& net = instance.network;
  // V-arcs of each vehicle in route order.
  std::vector<std::vector<int>> route_arcs(net.routes.size());
  for (int a = 0; a < g.num_arcs(); ++a)
    if (g.arcs[a].cls == ArcClass::Vehicle) route_arcs[g.arcs[a].vehicle].push_back(a);
  for (size_t h = 0; h < net.routes.size(); ++h) {
    const VehicleRoute& r = net.routes[h];
    std::vector<int> ft_positions;
    for (size_t l = 0; l < r.stops.size(); ++l)
      if (net.is_terminal(r.stops[l].stop)) ft_positions.push_back(static_cast<int>(l));
    if (ft_positions.size() == 1)
      throw ValidationError("stops", fmt::format("route '{}'", r.id),
                            "a route must visit either zero or at least two freight terminals");
    for (size_t k = 0; k + 1 < ft_positions.size(); ++k) {
      const int from = ft_positions[k], to = ft_positions[k + 1];
      const int tail = g.find_vertex(r.stops[from].stop, r.stops[from].time, static_cast<int>(h) + 1);
      const int head = g.find_vertex(r.stops[to].stop, r.stops[to].time, static_cast<int>(h) + 1);
      double cost = 0.0;
      for (int l = from; l < to; ++l) cost += g.arcs[route_arcs[h][l]].cost;
      const int f = add_arc(g, {tail, head, ArcClass::Segment, cost, static_cast<int>(h), -1});
      for (int l = from; l < to; ++l) {
        g.segment_of[route_arcs[h][l]] = f;
        g.contracted[f].push_back(route_arcs[h][l]);
      }
    }
  }
}

std::vector<std::string> prune_access_egress(ExpandedGraph& g, const Instance& instance) {
  require_not_finalized(g, "prune_access_egress");
  const Network& net = instance.network;
  std::vector<std::vector<int>> access(instance.requests.size()), egress(instance.requests.size());
  for (int a = 0; a < g.num_arcs(); ++a) {
    if (!g.arc_alive[a] || g.arcs[a].request < 0) continue;
    if (g.arcs[a].cls == ArcClass::Access) access[g.arcs[a].request].push_back(a);
    if (g.arcs[a].cls == ArcClass::Egress) egress[g.arcs[a].request].push_back(a);
  }
  // The iota terminals nearest to p, ties by stop index.
  auto nearest = [&](const Point& p) {
    std::vector<int> fts = net.terminals;
    std::stable_sort(fts.begin(), fts.end(), [&](int a, int b) {
      return euclidean(p, net.stops[a].position) < euclidean(p, net.stops[b].position);
    });
    fts.resize(std::min<size_t>(fts.size(), static_cast<size_t>(instance.params.iota)));
    return fts;
  };
  std::vector<std::string> stranded;
  for (size_t r = 0; r < instance.requests.size(); ++r) {
    const Request& req = instance.requests[r];
    if (!req.is_freight()) continue;
    std::set<int> keep;
    for (int s : nearest(req.origin)) {
      const int zeta = instance.zeta(req, req.origin, s);
      int best = -1;
      for (int a : access[r]) {
        const Vertex& v = g.vertices[g.arcs[a].head];
        if (v.stop != s || v.time - req.earliest < zeta) continue;
        if (best < 0 || v.time < g.vertices[g.arcs[best].head].time) best = a;
      }
      if (best >= 0) keep.insert(best);
    }
    for (int s : nearest(req.destination)) {
      const int zeta = instance.zeta(req, req.destination, s);
      int best = -1;
      for (int a : egress[r]) {
        const Vertex& v = g.vertices[g.arcs[a].tail];
        if (v.stop != s || req.latest - v.time < zeta) continue;
        if (best < 0 || v.time > g.vertices[g.arcs[best].tail].time) best = a;
      }
      if (best >= 0) keep.insert(best);
    }
    bool has_access = false, has_egress = false;
    for (int a : access[r]) {
      if (!keep.count(a)) g.arc_alive[a] = 0;
      else has_access = true;
    }
    for (int a : egress[r]) {
      if (!keep.count(a)) g.arc_alive[a] = 0;
      else has_egress = true;
    }
    if (!has_access || !has_egress) stranded.push_back(req.id);
  }
  return stranded;
}

void fill_derived(ExpandedGraph& g, const Instance& instance);

void finalize(ExpandedGraph& g, const Instance& instance) {
  require_not_finalized(g, "finalize");
  std::vector<int> vmap(g.vertices.size(), -1), amap(g.arcs.size(), -1);
  // Arcs touching a removed vertex go too.
  for (int a = 0; a < g.num_arcs(); ++a)
    if (!g.vertex_alive[g.arcs[a].tail] || !g.vertex_alive[g.arcs[a].head]) g.arc_alive[a] = 0;
  std::vector<Vertex> vertices;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!g.vertex_alive[v]) continue;
    vmap[v] = static_cast<int>(vertices.size());
    vertices.push_back(g.vertices[v]);
  }
  std::vector<Arc> arcs;
  for (int a = 0; a < g.num_arcs(); ++a) {
    if (!g.arc_alive[a]) continue;
    amap[a] = static_cast<int>(arcs.size());
    Arc arc = g.arcs[a];
    arc.tail = vmap[arc.tail];
    arc.head = vmap[arc.head];
    arcs.push_back(arc);
  }
  auto remap = [](int id, const std::vector<int>& map) { return id < 0 ? -1 : map[id]; };
  std::vector<int> segment_of(arcs.size(), -1);
  std::vector<std::vector<int>> contracted(arcs.size());
  for (int a = 0; a < g.num_arcs(); ++a) {
    if (amap[a] < 0) continue;
    segment_of[amap[a]] = remap(g.segment_of[a], amap);
    for (int c : g.contracted[a]) contracted[amap[a]].push_back(amap[c]);
  }
  for (auto& paths : g.passenger_paths)
    for (PassengerPath& p : paths) {
      for (int& a : p.arcs) a = amap[a];
      for (int& a : p.vehicle_arcs) a = amap[a];
    }
  for (size_t r = 0; r < g.origin.size(); ++r) {
    g.origin[r] = remap(g.origin[r], vmap);
    g.destination[r] = remap(g.destination[r], vmap);
    g.dummy[r] = remap(g.dummy[r], amap);
  }
  std::map<std::tuple<int, int, int>, int> stop_index;
  for (const auto& [key, v] : g.stop_index)
    if (vmap[v] >= 0) stop_index[key] = vmap[v];

  g.vertices = std::move(vertices);
  g.arcs = std::move(arcs);
  g.segment_of = std::move(segment_of);
  g.contracted = std::move(contracted);
  g.stop_index = std::move(stop_index);
  g.vertex_alive.assign(g.vertices.size(), 1);
  g.arc_alive.assign(g.arcs.size(), 1);
  g.finalized = true;
  fill_derived(g, instance);
}

void fill_derived(ExpandedGraph& g, const Instance& instance) {
  const int n = g.num_vertices(), m = g.num_arcs();
  g.terminal_vertex.assign(n, 0);
  for (int v = 0; v < n; ++v)
    if (g.vertices[v].kind == VertexKind::Stop && instance.network.is_terminal(g.vertices[v].stop))
      g.terminal_vertex[v] = 1;
  g.by_class.assign(7, {});
  g.contracted_arcs.clear();
  g.uncontracted_arcs.clear();
  g.freight_arcs.clear();
  g.in_freight.assign(m, 0);
  g.freight_out.assign(n, {});
  g.freight_in.assign(n, {});
  for (int a = 0; a < m; ++a) {
    const Arc& arc = g.arcs[a];
    g.by_class[static_cast<int>(arc.cls)].push_back(a);
    if (arc.cls == ArcClass::Vehicle) (g.segment_of[a] >= 0 ? g.contracted_arcs : g.uncontracted_arcs).push_back(a);
    bool freight = false;
    switch (arc.cls) {
      case ArcClass::Segment:
      case ArcClass::Dummy: freight = true; break;
      case ArcClass::Access:
      case ArcClass::Egress: freight = instance.requests[arc.request].is_freight(); break;
      case ArcClass::Holding:
      case ArcClass::Transit: freight = g.terminal_vertex[arc.tail] && g.terminal_vertex[arc.head]; break;
      case ArcClass::Vehicle: break;
    }
    if (!freight) continue;
    g.in_freight[a] = 1;
    g.freight_arcs.push_back(a);
    g.freight_out[arc.tail].push_back(a);
    g.freight_in[arc.head].push_back(a);
  }
}

ExpandedGraph build_graph(const Instance& instance) {
  ExpandedGraph g = expand(instance);
  precompute_passenger_paths(g, instance);
  add_dummy_arcs(g, instance);
  contract_segments(g, instance);
  prune_access_egress(g, instance);
  finalize(g, instance);
  return g;
}

}  // namespace cargohitch
