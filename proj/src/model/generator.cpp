#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "cargohitch/model.hpp"

namespace cargohitch {
namespace {

// Small helpers on top of mt19937_64 that avoid implementation-defined
// standard distributions, so instances are identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform() * (hi - lo + 1)) % (hi - lo + 1);
  }
  double normal() {
    // Box-Muller.
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

int pick_weighted(Rng& rng, const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.uniform() * total;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return static_cast<int>(i);
    u -= weights[i];
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace

std::vector<std::string> preset_names() { return {"tiny-oracle", "small", "medium"}; }

GeneratorConfig preset(const std::string& name) {
  GeneratorConfig c;
  c.name = name;
  if (name == "tiny-oracle") {
    c.lines = 2;
    c.stops_per_line = 4;  // 7 stops in total
    c.stop_spacing = 1000.0;
    c.vehicles_per_line = 1;
    c.units = 2;
    c.capacity_mix = {{4.0, 0.5}, {6.0, 0.5}};
    c.freight_requests = 4;
    c.passenger_requests = 3;
    c.freight_volume = 4.8;
    c.passenger_demand = 1.5;
    c.depots = 2;
    c.depot_ring_min = 1200.0;
    c.depot_ring_max = 2200.0;
    c.horizon = 2400;
    c.costs.design_cost = 2.0;
    c.costs.penalty_per_unit = 4.0;
    c.costs.routing_rate = 0.3;
    c.costs.transit_cost = 0.05;
    c.costs.egress_cost = 0.2;
    c.costs.access_cost = 0.0;
    c.params.freight_speed = 5.0;
  } else if (name == "small") {
    c.lines = 3;
    c.stops_per_line = 5;
    c.stop_spacing = 1200.0;
    c.vehicles_per_line = 2;
    c.freight_requests = 20;
    c.passenger_requests = 10;
    c.freight_volume = 100.0;
    c.depots = 4;
    c.depot_ring_min = 3500.0;
    c.depot_ring_max = 4500.0;
    c.horizon = 5400;
  } else if (name == "medium") {
    c.lines = 4;
    c.stops_per_line = 7;
    c.stop_spacing = 1000.0;
    c.vehicles_per_line = 6;
    c.freight_requests = 70;
    c.passenger_requests = 20;
    c.freight_volume = 2100.0;
    c.depots = 6;
    c.depot_ring_min = 4000.0;
    c.depot_ring_max = 5000.0;
    c.horizon = 7200;
    c.costs.design_cost = 20.0;
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError("preset", name, fmt::format("unknown preset; known presets: {}", known));
  }
  return c;
}

Instance generate_instance(const GeneratorConfig& cfg, std::uint64_t seed) {
  if (cfg.lines < 1 || cfg.stops_per_line < 2) throw ValidationError("lines", cfg.name, "need at least one line of two stops");
  if (cfg.vehicles_per_line < 1) throw ValidationError("vehicles_per_line", cfg.name, "need at least one vehicle per line");
  if (cfg.freight_requests < 0 || cfg.passenger_requests < 0)
    throw ValidationError("requests", cfg.name, "request counts must be nonnegative");
  if (cfg.freight_requests > 0 && !(cfg.freight_volume > 0.0))
    throw ValidationError("freight_volume", cfg.name, "freight volume must be positive");
  if (cfg.freight_requests > 0 && !cfg.line_end_terminals)
    throw ValidationError("line_end_terminals", cfg.name, "freight requests need freight terminals");
  if (cfg.depots < 1 && cfg.freight_requests > 0) throw ValidationError("depots", cfg.name, "need at least one depot");

  Rng rng(seed);
  Instance inst;
  inst.costs = cfg.costs;
  inst.params = cfg.params;
  Network& net = inst.network;

  // Lines are straight rays through a shared hub stop at the origin.
  net.stops.push_back({"hub", {0.0, 0.0}});
  std::vector<std::vector<int>> line_stops(cfg.lines);
  std::vector<int> terminal_flags(1, 1);
  const double angle0 = rng.uniform(0.0, std::numbers::pi / cfg.lines);
  for (int k = 0; k < cfg.lines; ++k) {
    const double angle = angle0 + k * std::numbers::pi / cfg.lines;
    const int left = (cfg.stops_per_line - 1) / 2;
    const int right = cfg.stops_per_line - 1 - left;
    for (int off = -left; off <= right; ++off) {
      if (off == 0) {
        line_stops[k].push_back(0);
        continue;
      }
      const double r = off * cfg.stop_spacing * rng.uniform(0.9, 1.1);
      net.stops.push_back({fmt::format("L{}S{}", k + 1, off + left), {r * std::cos(angle), r * std::sin(angle)}});
      const bool end = off == -left || off == right;
      terminal_flags.push_back(end && cfg.line_end_terminals ? 1 : (rng.uniform() < 0.25 ? 1 : 0));
      line_stops[k].push_back(static_cast<int>(net.stops.size()) - 1);
    }
  }
  if (!cfg.line_end_terminals) std::fill(terminal_flags.begin(), terminal_flags.end(), 0);
  for (size_t s = 0; s < terminal_flags.size(); ++s)
    if (terminal_flags[s]) net.terminals.push_back(static_cast<int>(s));

  CapacitySampler capacities(cfg.capacity_mix);
  int vehicle_no = 0;
  for (int k = 0; k < cfg.lines; ++k) {
    for (int v = 0; v < cfg.vehicles_per_line; ++v) {
      VehicleRoute route;
      route.id = fmt::format("V{}", ++vehicle_no);
      std::vector<int> seq = line_stops[k];
      if (v % 2 == 1) std::reverse(seq.begin(), seq.end());
      int t = 400 + rng.integer(0, cfg.horizon / 3) + (v / 2) * cfg.headway;
      for (size_t i = 0; i < seq.size(); ++i) {
        if (i > 0) {
          const double d = euclidean(net.stops[seq[i - 1]].position, net.stops[seq[i]].position);
          t += std::max(1, static_cast<int>(std::ceil(d / cfg.vehicle_speed)));
        }
        route.stops.push_back({seq[i], t});
      }
      route.units = cfg.units;
      route.unit_capacity = capacities.sample(rng.engine()) / cfg.units;
      net.routes.push_back(std::move(route));
    }
  }
  // Drop terminals that would leave a route with exactly one of them.
  for (bool changed = true; changed;) {
    changed = false;
    for (const VehicleRoute& r : net.routes) {
      int count = 0, last = -1;
      for (const RouteStop& s : r.stops)
        if (net.is_terminal(s.stop)) ++count, last = s.stop;
      if (count == 1) {
        net.terminals.erase(std::find(net.terminals.begin(), net.terminals.end(), last));
        changed = true;
      }
    }
  }
  if (cfg.freight_requests > 0 && net.terminals.empty())
    throw ValidationError("terminals", cfg.name, "freight requests need at least one freight terminal");

  double min_capacity = 1e300;
  for (const VehicleRoute& r : net.routes) min_capacity = std::min(min_capacity, r.capacity());

  // Passengers ride an existing vehicle between two of its stops.
  const double passenger_q =
      cfg.passenger_requests > 0 ? std::min(cfg.passenger_demand, 0.95 * min_capacity / cfg.passenger_requests) : 0.0;
  for (int p = 0; p < cfg.passenger_requests; ++p) {
    const VehicleRoute& r = net.routes[rng.integer(0, static_cast<int>(net.routes.size()) - 1)];
    const int n = static_cast<int>(r.stops.size());
    const int i = rng.integer(0, n - 2);
    const int j = rng.integer(i + 1, n - 1);
    Request q;
    q.id = fmt::format("p{}", p + 1);
    q.kind = RequestKind::Passenger;
    const Point& a = net.stops[r.stops[i].stop].position;
    const Point& b = net.stops[r.stops[j].stop].position;
    q.origin = {a.x + rng.uniform(-40.0, 40.0), a.y + rng.uniform(-40.0, 40.0)};
    q.destination = {b.x + rng.uniform(-40.0, 40.0), b.y + rng.uniform(-40.0, 40.0)};
    const int walk_a = static_cast<int>(std::ceil(euclidean(q.origin, a) / inst.params.walk_speed));
    const int walk_b = static_cast<int>(std::ceil(euclidean(q.destination, b) / inst.params.walk_speed));
    q.earliest = std::max(0, r.stops[i].time - walk_a - rng.integer(0, 300));
    q.latest = r.stops[j].time + walk_b + rng.integer(0, 600);
    q.demand = passenger_q;
    inst.requests.push_back(std::move(q));
  }

  std::vector<Point> depots;
  for (int d = 0; d < cfg.depots; ++d) {
    const double radius = rng.uniform(cfg.depot_ring_min, cfg.depot_ring_max);
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    depots.push_back({radius * std::cos(angle), radius * std::sin(angle)});
  }
  std::vector<WeightedSpot> spots = cfg.destination_weights;
  if (spots.empty()) {
    spots.push_back({{0.0, 0.0}, 2.0, cfg.stop_spacing});
    for (int k = 0; k < cfg.lines; ++k) {
      spots.push_back({net.stops[line_stops[k].front()].position, 1.0, 0.5 * cfg.stop_spacing});
      spots.push_back({net.stops[line_stops[k].back()].position, 1.0, 0.5 * cfg.stop_spacing});
    }
  }
  std::vector<double> spot_weights;
  for (const auto& s : spots) spot_weights.push_back(s.weight);
  const double freight_q = cfg.freight_requests > 0 ? cfg.freight_volume / cfg.freight_requests : 0.0;
  for (int f = 0; f < cfg.freight_requests; ++f) {
    Request q;
    q.id = fmt::format("f{}", f + 1);
    q.kind = RequestKind::Freight;
    q.origin = depots[rng.integer(0, static_cast<int>(depots.size()) - 1)];
    const WeightedSpot& s = spots[pick_weighted(rng, spot_weights)];
    q.destination = {s.center.x + s.spread * rng.normal(), s.center.y + s.spread * rng.normal()};
    q.demand = freight_q;
    q.earliest = rng.integer(0, cfg.horizon / 4);
    q.latest = q.earliest + cfg.horizon + rng.integer(0, cfg.horizon / 2);
    inst.requests.push_back(std::move(q));
  }
  validate(inst);
  return inst;
}

}  // namespace cargohitch
