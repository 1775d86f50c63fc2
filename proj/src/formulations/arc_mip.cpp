#include <fmt/format.h>

#include "cargohitch/formulations.hpp"

namespace cargohitch {

using lp::Entry;
using lp::RowSense;

ArcMip build_arc_mip(const ExpandedGraph& graph, const Instance& instance) {
  if (!graph.finalized) throw std::logic_error("build_arc_mip needs a finalized graph");
  const Network& net = instance.network;
  const int nr = static_cast<int>(instance.requests.size());
  const int na = graph.num_arcs();
  ArcMip m;
  lp::LinearProgram& lp = m.lp;

  for (size_t h = 0; h < net.routes.size(); ++h) {
    const VehicleRoute& v = net.routes[h];
    m.y.push_back(lp.add_variable({fmt::format("y_{}", v.id), 0.0, static_cast<double>(v.units),
                                   instance.design_cost(v), true}));
  }
  m.x.assign(na, -1);
  for (int a : graph.arcs_of(ArcClass::Segment)) m.x[a] = lp.add_variable({fmt::format("x_{}", a), 0.0, lp::kInfinity, 0.0, true});
  m.g.assign(nr, {});
  for (int r = 0; r < nr; ++r)
    for (size_t p = 0; p < graph.passenger_paths[r].size(); ++p)
      m.g[r].push_back(lp.add_variable({fmt::format("g_{}_{}", instance.requests[r].id, p)}));
  m.f.assign(nr, {});
  for (int r = 0; r < nr; ++r) {
    const Request& req = instance.requests[r];
    if (!req.is_freight()) continue;
    for (int a : graph.freight_arcs)
      m.f[r].push_back(lp.add_variable({fmt::format("f_{}_{}", req.id, a), 0.0, 1.0, req.demand * graph.arcs[a].cost, true}));
  }

  // Service level.
  double passenger_total = 0.0;
  std::vector<Entry> service;
  for (int r = 0; r < nr; ++r) {
    const Request& req = instance.requests[r];
    if (req.is_freight()) continue;
    passenger_total += req.demand;
    for (int var : m.g[r]) service.push_back({var, req.demand});
  }
  m.service_row = lp.add_row({"service", RowSense::GreaterEqual, instance.params.chi * passenger_total}, service);

  // Flow conservation at origins, destinations and FT representations.
  std::vector<int> position(na, -1);
  for (size_t k = 0; k < graph.freight_arcs.size(); ++k) position[graph.freight_arcs[k]] = static_cast<int>(k);
  m.flow_rows.assign(nr, std::vector<int>(graph.num_vertices(), -1));
  for (int r = 0; r < nr; ++r) {
    if (!instance.requests[r].is_freight()) continue;
    for (int v = 0; v < graph.num_vertices(); ++v) {
      const Vertex& vx = graph.vertices[v];
      if (vx.kind == VertexKind::Stop && !graph.terminal_vertex[v]) continue;
      std::vector<Entry> row;
      for (int a : graph.freight_out[v]) row.push_back({m.f[r][position[a]], 1.0});
      for (int a : graph.freight_in[v]) row.push_back({m.f[r][position[a]], -1.0});
      const double xi = v == graph.origin[r] ? 1.0 : (v == graph.destination[r] ? -1.0 : 0.0);
      m.flow_rows[r][v] = lp.add_row({fmt::format("flow_{}_{}", instance.requests[r].id, v), RowSense::Equal, xi}, row);
    }
  }

  // Passenger capacity on every vehicle arc; contracted arcs give up lambda
  // per unit allocated to freight on their segment.
  std::vector<std::vector<Entry>> passenger_load(na);
  for (int r = 0; r < nr; ++r)
    for (size_t p = 0; p < graph.passenger_paths[r].size(); ++p)
      for (int a : graph.passenger_paths[r][p].vehicle_arcs)
        passenger_load[a].push_back({m.g[r][p], instance.requests[r].demand});
  m.passenger_capacity_rows.assign(na, -1);
  for (int a : graph.arcs_of(ArcClass::Vehicle)) {
    const VehicleRoute& v = net.routes[graph.arcs[a].vehicle];
    std::vector<Entry> row = passenger_load[a];
    if (graph.segment_of[a] >= 0) {
      if (m.x[graph.segment_of[a]] < 0) throw std::logic_error("contracted arc without segment variable");
      row.push_back({m.x[graph.segment_of[a]], v.unit_capacity});
    }
    m.passenger_capacity_rows[a] =
        lp.add_row({fmt::format("pcap_{}", a), RowSense::LessEqual, v.unit_capacity * v.units}, row);
  }

  // Freight capacity per segment.
  m.freight_capacity_rows.assign(na, -1);
  for (int a : graph.arcs_of(ArcClass::Segment)) {
    const VehicleRoute& v = net.routes[graph.arcs[a].vehicle];
    std::vector<Entry> row{{m.x[a], -v.unit_capacity}};
    for (int r = 0; r < nr; ++r)
      if (instance.requests[r].is_freight()) row.push_back({m.f[r][position[a]], instance.requests[r].demand});
    m.freight_capacity_rows[a] = lp.add_row({fmt::format("fcap_{}", a), RowSense::LessEqual, 0.0}, row);
  }

  m.passenger_convexity_rows.assign(nr, -1);
  for (int r = 0; r < nr; ++r) {
    if (m.g[r].empty()) continue;
    std::vector<Entry> row;
    for (int var : m.g[r]) row.push_back({var, 1.0});
    m.passenger_convexity_rows[r] =
        lp.add_row({fmt::format("pconv_{}", instance.requests[r].id), RowSense::LessEqual, 1.0}, row);
  }

  m.assignment_rows.assign(na, -1);
  for (int a : graph.arcs_of(ArcClass::Segment)) {
    const Entry row[] = {{m.x[a], 1.0}, {m.y[graph.arcs[a].vehicle], -1.0}};
    m.assignment_rows[a] = lp.add_row({fmt::format("assign_{}", a), RowSense::LessEqual, 0.0}, row);
  }
  for (size_t h = 0; h < net.routes.size(); ++h) {
    const Entry row[] = {{m.y[h], 1.0}};
    m.unit_rows.push_back(lp.add_row({fmt::format("units_{}", net.routes[h].id), RowSense::LessEqual,
                                      static_cast<double>(net.routes[h].units)},
                                     row));
  }
  return m;
}

}  // namespace cargohitch
