#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "cargohitch/report.hpp"

namespace cargohitch {

namespace {

struct Interval {
  int start;
  int end;
};

bool overlaps(const Interval& iv, int b0, int b1) { return iv.start < b1 && iv.end > b0; }

std::string num(double v) { return fmt::format("{:.6f}", v); }

}  // namespace

double rejection_share(const Solution& solution, const Instance& instance) {
  double total = 0.0, rejected = 0.0;
  for (const Request& r : instance.requests)
    if (r.is_freight()) total += r.demand;
  for (int r : solution.rejected) rejected += instance.requests[r].demand;
  return total > 0.0 ? rejected / total : 0.0;
}

UtilizationSeries utilization_report(const Solution& solution, const ExpandedGraph& graph, const Instance& instance,
                                     int bucket_seconds) {
  if (bucket_seconds <= 0) throw ValidationError("bucket", "utilization report", "bucket length must be positive");
  UtilizationSeries out;
  const int na = graph.num_arcs();
  auto interval = [&](int a) {
    return Interval{graph.vertices[graph.arcs[a].tail].time, graph.vertices[graph.arcs[a].head].time};
  };

  // Loads per vehicle arc.
  std::vector<double> passenger_load(na, 0.0), freight_load(na, 0.0);
  double passenger_total = 0.0, freight_total = 0.0;
  struct Mover {
    double weight;
    std::vector<Interval> moving;
    bool freight;
  };
  std::vector<Mover> movers;
  for (size_t r = 0; r < instance.requests.size(); ++r) {
    const Request& req = instance.requests[r];
    if (req.is_freight()) {
      freight_total += req.demand;
      continue;
    }
    passenger_total += req.demand;
    if (r >= solution.g.size()) continue;
    for (size_t p = 0; p < solution.g[r].size(); ++p) {
      const double flow = solution.g[r][p];
      if (flow <= 0.0) continue;
      Mover m{req.demand * flow, {}, false};
      for (int a : graph.passenger_paths[r][p].vehicle_arcs) {
        passenger_load[a] += req.demand * flow;
        m.moving.push_back(interval(a));
      }
      movers.push_back(std::move(m));
    }
  }
  for (const auto& [r, arcs] : solution.paths) {
    const double q = instance.requests[r].demand;
    Mover m{q, {}, true};
    for (int a : arcs) {
      if (graph.arcs[a].cls != ArcClass::Segment) continue;
      m.moving.push_back(interval(a));
      for (int v : graph.contracted[a]) freight_load[v] += q;
    }
    movers.push_back(std::move(m));
  }

  // Temporal shares over the span of the graph.
  int t0 = 0, t1 = 0;
  bool first = true;
  for (const Vertex& v : graph.vertices) {
    t0 = first ? v.time : std::min(t0, v.time);
    t1 = first ? v.time : std::max(t1, v.time);
    first = false;
  }
  for (int b0 = t0; b0 < t1; b0 += bucket_seconds) {
    const int b1 = b0 + bucket_seconds;
    UtilizationSeries::Temporal row{b0, b1, 0.0, 0.0};
    for (const Mover& m : movers) {
      const bool active = std::any_of(m.moving.begin(), m.moving.end(), [&](const Interval& iv) { return overlaps(iv, b0, b1); });
      if (!active) continue;
      (m.freight ? row.freight_share : row.passenger_share) += m.weight;
    }
    if (passenger_total > 0.0) row.passenger_share /= passenger_total;
    if (freight_total > 0.0) row.freight_share /= freight_total;
    out.temporal.push_back(row);
  }

  // Spatial volumes per undirected stop pair, and the per-vehicle rows.
  std::map<std::pair<int, int>, UtilizationSeries::Spatial> legs;
  for (int a : graph.arcs_of(ArcClass::Vehicle)) {
    const int s = graph.vertices[graph.arcs[a].tail].stop;
    const int t = graph.vertices[graph.arcs[a].head].stop;
    auto key = std::minmax(s, t);
    auto& leg = legs[{key.first, key.second}];
    leg.stop_a = key.first;
    leg.stop_b = key.second;
    leg.passenger_volume += passenger_load[a];
    leg.freight_volume += freight_load[a];

    const VehicleRoute& v = instance.network.routes[graph.arcs[a].vehicle];
    UtilizationSeries::VehicleRow row;
    row.vehicle = graph.arcs[a].vehicle;
    row.arc = a;
    row.segment = graph.segment_of[a];
    row.passenger_load = passenger_load[a];
    row.freight_load = freight_load[a];
    if (row.segment >= 0) {
      auto it = solution.x.find(row.segment);
      row.freight_capacity = it == solution.x.end() ? 0.0 : v.unit_capacity * it->second;
    }
    row.capacity = v.capacity();
    out.vehicles.push_back(row);
  }
  for (auto& [key, leg] : legs) out.spatial.push_back(leg);
  std::stable_sort(out.vehicles.begin(), out.vehicles.end(), [&](const auto& a, const auto& b) {
    const int ta = graph.vertices[graph.arcs[a.arc].tail].time;
    const int tb = graph.vertices[graph.arcs[b.arc].tail].time;
    return std::tie(a.vehicle, ta, a.arc) < std::tie(b.vehicle, tb, b.arc);
  });
  return out;
}

std::string temporal_csv(const UtilizationSeries& series) {
  std::string out = "bucket_start,bucket_end,passenger_share,freight_share\n";
  for (const auto& r : series.temporal)
    out += fmt::format("{},{},{},{}\n", r.bucket_start, r.bucket_end, num(r.passenger_share), num(r.freight_share));
  return out;
}

std::string spatial_csv(const UtilizationSeries& series, const Instance& instance) {
  std::string out = "stop_a,stop_b,passenger_volume,freight_volume\n";
  for (const auto& r : series.spatial)
    out += fmt::format("{},{},{},{}\n", instance.network.stops[r.stop_a].id, instance.network.stops[r.stop_b].id,
                       num(r.passenger_volume), num(r.freight_volume));
  return out;
}

std::string vehicles_csv(const UtilizationSeries& series, const ExpandedGraph& graph, const Instance& instance) {
  std::string out =
      "vehicle,from_stop,to_stop,depart,arrive,segment,passenger_load,freight_load,freight_capacity,capacity\n";
  for (const auto& r : series.vehicles) {
    const Vertex& tail = graph.vertices[graph.arcs[r.arc].tail];
    const Vertex& head = graph.vertices[graph.arcs[r.arc].head];
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", instance.network.routes[r.vehicle].id,
                       instance.network.stops[tail.stop].id, instance.network.stops[head.stop].id, tail.time, head.time,
                       r.segment >= 0 ? graph.arc_key(instance, r.segment) : std::string(), num(r.passenger_load),
                       num(r.freight_load), num(r.freight_capacity), num(r.capacity));
  }
  return out;
}

}  // namespace cargohitch
