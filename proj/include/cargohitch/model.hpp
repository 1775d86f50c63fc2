#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cargohitch {

// Raised for malformed or inconsistent input. `field` and `record` locate
// the offending entry (e.g. "latest", "request 'f3'").
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, std::string record, const std::string& message);
  [[nodiscard]] const std::string& field() const { return field_; }
  [[nodiscard]] const std::string& record() const { return record_; }

 private:
  std::string field_;
  std::string record_;
};

struct Point {
  double x = 0.0;  // meters
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

[[nodiscard]] double euclidean(const Point& a, const Point& b);

enum class RequestKind : std::uint8_t { Passenger, Freight };

struct Request {
  std::string id;
  RequestKind kind = RequestKind::Freight;
  Point origin;
  Point destination;
  double demand = 1.0;  // passenger equivalents
  int earliest = 0;     // seconds
  int latest = 0;
  std::optional<int> zeta;         // relocation threshold, seconds
  std::optional<double> penalty;   // overrides penalty_per_unit * demand
  bool operator==(const Request&) const = default;
  [[nodiscard]] bool is_freight() const { return kind == RequestKind::Freight; }
};

struct Stop {
  std::string id;
  Point position;
  bool operator==(const Stop&) const = default;
};

struct RouteStop {
  int stop = 0;  // index into Network::stops
  int time = 0;  // arrival, seconds
  bool operator==(const RouteStop&) const = default;
};

struct VehicleRoute {
  std::string id;
  std::vector<RouteStop> stops;
  int units = 1;               // kappa
  double unit_capacity = 1.0;  // lambda
  std::optional<double> design_cost;
  bool operator==(const VehicleRoute&) const = default;
  [[nodiscard]] double capacity() const { return units * unit_capacity; }
};

struct Network {
  std::vector<Stop> stops;
  std::vector<int> terminals;  // sorted stop indices
  std::vector<VehicleRoute> routes;
  std::map<std::pair<int, int>, double> distance_table;  // km, key (min, max)

  bool operator==(const Network&) const = default;

  [[nodiscard]] int find_stop(std::string_view id) const;  // -1 if absent
  [[nodiscard]] bool is_terminal(int stop) const;
  /// Table entry if present, otherwise Euclidean distance in km.
  [[nodiscard]] double distance_km(int a, int b) const;
};

struct CostModel {
  double design_cost = 68.02;       // per HTU per vehicle
  double penalty_per_unit = 1.92;   // per passenger equivalent of a rejected request
  double routing_rate = 0.0406;     // per passenger equivalent and km
  double transit_cost = 0.0;        // per passenger equivalent per load/unload
  double egress_cost = 0.8418;
  double access_cost = 0.0;
  bool operator==(const CostModel&) const = default;
};

struct Params {
  double chi = 1.0;
  int k = 3;
  int iota = 1;
  std::optional<int> zeta_default;
  double walk_speed = 1.0;     // m/s, passengers
  double freight_speed = 5.0;  // m/s, first/last mile of freight
  bool operator==(const Params&) const = default;
};

struct Instance {
  Network network;
  std::vector<Request> requests;
  CostModel costs;
  Params params;

  bool operator==(const Instance&) const = default;

  [[nodiscard]] double penalty(const Request& r) const {
    return r.penalty ? *r.penalty : costs.penalty_per_unit * r.demand;
  }
  [[nodiscard]] double design_cost(const VehicleRoute& v) const {
    return v.design_cost ? *v.design_cost : costs.design_cost;
  }
  /// Relocation threshold between a request endpoint and a terminal stop.
  [[nodiscard]] int zeta(const Request& r, const Point& endpoint, int terminal) const;
  [[nodiscard]] int num_freight() const;
  [[nodiscard]] int num_passenger() const;
};

/// Throws ValidationError on the first violated invariant.
void validate(const Instance& instance);
void validate(const Network& network);

// JSON instance files.
[[nodiscard]] Instance load_instance(const std::string& path);
[[nodiscard]] Instance parse_instance(std::string_view json_text);
[[nodiscard]] std::string dump_instance(const Instance& instance);
void save_instance(const Instance& instance, const std::string& path);

// Economic parameters behind the cost model.
struct EconomicParameters {
  double investment = 1.51e6;
  double years = 25.0;
  double base_rate = 0.0362;
  double truck_externality = 0.2;  // per vehicle km
  double truck_tour_km = 80.0;
  double truck_capacity = 100.0;   // parcels
  double parcels_per_unit = 12.0;
  double bike_externality = 0.115;
  double bike_tour_km = 12.2;
  double bike_capacity = 20.0;
  double routing_rate = 0.0406;
  double transit_cost = 0.0;
};

[[nodiscard]] CostModel derive_costs(const EconomicParameters& econ);

// Vehicle type mix: capacity -> probability.
class CapacitySampler {
 public:
  CapacitySampler();  // default vehicle mix
  explicit CapacitySampler(std::vector<std::pair<double, double>> distribution);
  [[nodiscard]] double sample(std::mt19937_64& rng) const;
  [[nodiscard]] const std::vector<std::pair<double, double>>& distribution() const { return distribution_; }

 private:
  std::vector<std::pair<double, double>> distribution_;
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GtfsOptions {
  int window_start = 0;
  int window_end = 24 * 3600;
  std::vector<std::string> terminals;  // stop ids
  int units = 2;
  CapacitySampler capacities;
  std::uint64_t seed = 1;
};

/// Reads stops.txt, trips.txt and stop_times.txt from `directory` and builds
/// vehicle routes by chaining trips that end and start at the same stop.
[[nodiscard]] Network ingest_gtfs_subset(const std::string& directory, const GtfsOptions& options);

struct Trip {
  std::string id;
  std::vector<RouteStop> stops;
};

/// Chains trips into vehicle itineraries. Returns groups of trip indices in
/// travel order; every trip appears in exactly one group.
[[nodiscard]] std::vector<std::vector<int>> concatenate_trips(const std::vector<Trip>& trips);

// Synthetic instances.
struct WeightedSpot {
  Point center;
  double weight = 1.0;
  double spread = 300.0;  // m, standard deviation
};

struct GeneratorConfig {
  std::string name = "custom";
  int lines = 2;
  int stops_per_line = 4;
  double stop_spacing = 1000.0;  // m
  int vehicles_per_line = 1;
  int headway = 600;             // s between vehicles of a line
  double vehicle_speed = 10.0;   // m/s
  int units = 2;
  std::vector<std::pair<double, double>> capacity_mix{{870.0, 0.52}, {912.0, 0.13}, {936.0, 0.35}};
  bool line_end_terminals = true;
  int freight_requests = 4;
  int passenger_requests = 2;
  double freight_volume = 4.0;   // total passenger equivalents
  double passenger_demand = 24.71;
  int depots = 3;
  double depot_ring_min = 3000.0;
  double depot_ring_max = 4000.0;
  std::vector<WeightedSpot> destination_weights;
  int horizon = 3600;
  CostModel costs;
  Params params;
};

[[nodiscard]] GeneratorConfig preset(const std::string& name);  // throws ValidationError
[[nodiscard]] std::vector<std::string> preset_names();
[[nodiscard]] Instance generate_instance(const GeneratorConfig& config, std::uint64_t seed);

}  // namespace cargohitch
