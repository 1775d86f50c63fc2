#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "cargohitch/formulations.hpp"

namespace cargohitch {

using lp::Entry;
using lp::RowSense;

std::vector<int> Column::key() const {
  std::vector<int> k = arcs;
  std::sort(k.begin(), k.end());
  return k;
}

Column make_column(const ExpandedGraph& graph, int request, std::vector<int> arcs) {
  Column c;
  c.request = request;
  c.arcs = std::move(arcs);
  for (int a : c.arcs) c.cost += graph.arcs[a].cost;
  return c;
}

MasterState::MasterState(const ExpandedGraph& graph, const Instance& instance) : graph_(&graph), instance_(&instance) {
  if (!graph.finalized) throw std::logic_error("MasterState needs a finalized graph");
  const Network& net = instance.network;
  const int nr = static_cast<int>(instance.requests.size());
  const int na = graph.num_arcs();

  for (const VehicleRoute& v : net.routes)
    y_.push_back(lp_.add_variable({fmt::format("y_{}", v.id), 0.0, lp::kInfinity, instance.design_cost(v), false}));
  x_.assign(na, -1);
  for (int a : graph.arcs_of(ArcClass::Segment)) x_[a] = lp_.add_variable({fmt::format("x_{}", a)});
  g_.assign(nr, {});
  for (int r = 0; r < nr; ++r)
    for (size_t p = 0; p < graph.passenger_paths[r].size(); ++p)
      g_[r].push_back(lp_.add_variable({fmt::format("g_{}_{}", instance.requests[r].id, p)}));
  // Artificial per convexity row, disabled (upper bound 0) unless a branch
  // forbids the request's dummy path.
  artificial_.assign(nr, -1);
  for (int r = 0; r < nr; ++r)
    if (instance.requests[r].is_freight())
      artificial_[r] =
          lp_.add_variable({fmt::format("art_{}", instance.requests[r].id), 0.0, 0.0, kArtificialCost, false});

  double passenger_total = 0.0;
  std::vector<Entry> service;
  for (int r = 0; r < nr; ++r) {
    const Request& req = instance.requests[r];
    if (req.is_freight()) continue;
    passenger_total += req.demand;
    for (int var : g_[r]) service.push_back({var, req.demand});
  }
  service_row_ = lp_.add_row({"service", RowSense::GreaterEqual, instance.params.chi * passenger_total}, service);

  std::vector<std::vector<Entry>> passenger_load(na);
  for (int r = 0; r < nr; ++r)
    for (size_t p = 0; p < graph.passenger_paths[r].size(); ++p)
      for (int a : graph.passenger_paths[r][p].vehicle_arcs)
        passenger_load[a].push_back({g_[r][p], instance.requests[r].demand});
  passenger_rows_.assign(na, -1);
  for (int a : graph.arcs_of(ArcClass::Vehicle)) {
    const VehicleRoute& v = net.routes[graph.arcs[a].vehicle];
    std::vector<Entry> row = passenger_load[a];
    if (graph.segment_of[a] >= 0) row.push_back({x_[graph.segment_of[a]], v.unit_capacity});
    passenger_rows_[a] = lp_.add_row({fmt::format("pcap_{}", a), RowSense::LessEqual, v.unit_capacity * v.units}, row);
  }

  capacity_rows_.assign(na, -1);
  assignment_rows_.assign(na, -1);
  for (int a : graph.arcs_of(ArcClass::Segment)) {
    const VehicleRoute& v = net.routes[graph.arcs[a].vehicle];
    const Entry cap[] = {{x_[a], -v.unit_capacity}};
    capacity_rows_[a] = lp_.add_row({fmt::format("fcap_{}", a), RowSense::LessEqual, 0.0}, cap);
  }
  convexity_rows_.assign(nr, -1);
  for (int r = 0; r < nr; ++r) {
    if (!instance.requests[r].is_freight()) continue;
    const Entry row[] = {{artificial_[r], 1.0}};
    convexity_rows_[r] = lp_.add_row({fmt::format("conv_{}", instance.requests[r].id), RowSense::Equal, 1.0}, row);
  }
  passenger_convexity_rows_.assign(nr, -1);
  for (int r = 0; r < nr; ++r) {
    if (g_[r].empty()) continue;
    std::vector<Entry> row;
    for (int var : g_[r]) row.push_back({var, 1.0});
    passenger_convexity_rows_[r] =
        lp_.add_row({fmt::format("pconv_{}", instance.requests[r].id), RowSense::LessEqual, 1.0}, row);
  }
  for (int a : graph.arcs_of(ArcClass::Segment)) {
    const Entry row[] = {{x_[a], 1.0}, {y_[graph.arcs[a].vehicle], -1.0}};
    assignment_rows_[a] = lp_.add_row({fmt::format("assign_{}", a), RowSense::LessEqual, 0.0}, row);
  }
  for (size_t h = 0; h < net.routes.size(); ++h) {
    const Entry row[] = {{y_[h], 1.0}};
    unit_rows_.push_back(lp_.add_row(
        {fmt::format("units_{}", net.routes[h].id), RowSense::LessEqual, static_cast<double>(net.routes[h].units)}, row));
  }

  by_request_.assign(nr, {});
  keys_.assign(nr, {});
  std::vector<Column> dummies;
  for (int r = 0; r < nr; ++r)
    if (instance.requests[r].is_freight()) dummies.push_back(make_column(graph, r, {graph.dummy[r]}));
  add_columns(dummies);
}

int MasterState::add_columns(std::span<const Column> columns) {
  int added = 0;
  for (const Column& c : columns) {
    if (!keys_.at(c.request).insert(c.key()).second) {
      ++duplicates_;
      continue;
    }
    const Request& req = instance_->requests[c.request];
    std::vector<Entry> entries{{convexity_rows_[c.request], 1.0}};
    for (int a : c.arcs)
      if (graph_->arcs[a].cls == ArcClass::Segment) entries.push_back({capacity_rows_[a], req.demand});
    const int var = lp_.add_variable(
        {fmt::format("z_{}_{}", req.id, by_request_[c.request].size()), 0.0, lp::kInfinity, req.demand * c.cost, false},
        entries);
    by_request_[c.request].push_back(static_cast<int>(columns_.size()));
    columns_.push_back(c);
    column_vars_.push_back(var);
    ++added;
  }
  return added;
}

std::vector<double> MasterState::lower_bounds() const {
  std::vector<double> out;
  for (const auto& v : lp_.variables()) out.push_back(v.lower);
  return out;
}

std::vector<double> MasterState::upper_bounds() const {
  std::vector<double> out;
  for (const auto& v : lp_.variables()) out.push_back(v.upper);
  return out;
}

namespace {

// sign > 0: dual must be >= 0; sign < 0: <= 0.
double signed_dual(double value, int sign, const std::string& row) {
  if (sign * value >= 0.0) return value;
  if (std::abs(value) <= 1e-6) return 0.0;
  throw MasterError(fmt::format("dual of row {} has the wrong sign: {}", row, value));
}

}  // namespace

DualValues MasterState::extract_duals(const lp::LpSolution& solution) const {
  if (solution.duals.size() != static_cast<size_t>(lp_.num_rows()))
    throw MasterError("dual vector does not match the master's rows");
  const int na = graph_->num_arcs();
  const int nr = static_cast<int>(instance_->requests.size());
  auto dual = [&](int row, int sign) { return signed_dual(solution.duals[row], sign, lp_.row(row).name); };
  DualValues d;
  d.alpha.assign(na, 0.0);
  d.pi.assign(na, 0.0);
  d.upsilon.assign(na, 0.0);
  d.nu.assign(na, 0.0);
  d.eta.assign(nr, 0.0);
  d.delta.assign(nr, 0.0);
  d.gamma = dual(service_row_, +1);
  for (int a = 0; a < na; ++a) {
    if (capacity_rows_[a] >= 0) d.alpha[a] = dual(capacity_rows_[a], -1);
    if (assignment_rows_[a] >= 0) d.pi[a] = dual(assignment_rows_[a], -1);
    if (passenger_rows_[a] >= 0) (graph_->segment_of[a] >= 0 ? d.upsilon : d.nu)[a] = dual(passenger_rows_[a], -1);
  }
  for (int r = 0; r < nr; ++r) {
    if (convexity_rows_[r] >= 0) d.eta[r] = solution.duals[convexity_rows_[r]];
    if (passenger_convexity_rows_[r] >= 0) d.delta[r] = dual(passenger_convexity_rows_[r], -1);
  }
  for (int row : unit_rows_) d.tau.push_back(dual(row, -1));
  return d;
}

lp::LinearProgram MasterState::integerize() const {
  lp::LinearProgram out = lp_;
  for (int var : y_) out.set_integer(var, true);
  for (int var : x_)
    if (var >= 0) out.set_integer(var, true);
  for (int var : column_vars_) out.set_integer(var, true);
  return out;
}

}  // namespace cargohitch
