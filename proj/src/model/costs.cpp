#include <cmath>

#include <fmt/format.h>

#include "cargohitch/model.hpp"

namespace cargohitch {

CostModel derive_costs(const EconomicParameters& e) {
  const std::pair<const char*, double> positive[] = {
      {"investment", e.investment},         {"years", e.years},
      {"base_rate", e.base_rate},           {"truck_externality", e.truck_externality},
      {"truck_tour_km", e.truck_tour_km},   {"truck_capacity", e.truck_capacity},
      {"parcels_per_unit", e.parcels_per_unit}, {"bike_externality", e.bike_externality},
      {"bike_tour_km", e.bike_tour_km},     {"bike_capacity", e.bike_capacity},
      {"routing_rate", e.routing_rate},
  };
  for (const auto& [name, value] : positive)
    if (!(value > 0.0) || !std::isfinite(value))
      throw ValidationError(name, "economic parameters", "parameter must be positive");
  if (e.transit_cost < 0.0) throw ValidationError("transit_cost", "economic parameters", "must be nonnegative");

  CostModel c;
  // Daily present value of one HTU.
  c.design_cost = e.investment / (e.years * 365.0 * std::pow(1.0 + e.base_rate, e.years));
  c.penalty_per_unit = e.truck_externality * e.truck_tour_km * e.parcels_per_unit / e.truck_capacity;
  c.egress_cost = e.bike_externality * e.bike_tour_km * e.parcels_per_unit / e.bike_capacity;
  c.routing_rate = e.routing_rate;
  c.transit_cost = e.transit_cost;
  c.access_cost = 0.0;
  return c;
}

CapacitySampler::CapacitySampler() : CapacitySampler({{870.0, 0.52}, {912.0, 0.13}, {936.0, 0.35}}) {}

CapacitySampler::CapacitySampler(std::vector<std::pair<double, double>> distribution)
    : distribution_(std::move(distribution)) {
  if (distribution_.empty()) throw ValidationError("capacities", "capacity sampler", "distribution is empty");
  double total = 0.0;
  for (const auto& [cap, p] : distribution_) {
    if (!(cap > 0.0) || p < 0.0) throw ValidationError("capacities", "capacity sampler", "invalid capacity or probability");
    total += p;
  }
  if (!(total > 0.0)) throw ValidationError("capacities", "capacity sampler", "probabilities sum to zero");
}

double CapacitySampler::sample(std::mt19937_64& rng) const {
  double total = 0.0;
  for (const auto& entry : distribution_) total += entry.second;
  // Inverse-CDF on a 53-bit uniform so results do not depend on the
  // standard library's distribution implementations.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
  double acc = 0.0;
  for (const auto& [cap, p] : distribution_) {
    acc += p;
    if (u < acc) return cap;
  }
  return distribution_.back().first;
}

}  // namespace cargohitch
