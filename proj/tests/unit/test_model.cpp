#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "cargohitch/model.hpp"
#include "support.hpp"

using namespace cargohitch;
using testing_support::data_path;

namespace {

std::string minimal_instance(const std::string& request_fields) {
  return R"({"network": {"stops": [{"id": "a", "x": 0, "y": 0}, {"id": "b", "x": 100, "y": 0}],
             "terminals": ["a", "b"],
             "routes": [{"id": "v", "units": 1, "unit_capacity": 5,
                         "stops": [{"stop": "a", "time": 0}, {"stop": "b", "time": 10}]}]},
             "requests": [{"id": "f1", "kind": "freight", "origin": {"x": 0, "y": 0},
                           "destination": {"x": 100, "y": 0}, )" +
         request_fields + "}]}";
}

}  // namespace

TEST(InstanceIo, Fig5RoundTrip) {
  const Instance inst = testing_support::fig5();
  EXPECT_EQ(inst.network.stops.size(), 6u);
  EXPECT_EQ(inst.network.routes.size(), 2u);
  EXPECT_EQ(inst.num_freight(), 1);
  EXPECT_EQ(inst.num_passenger(), 1);
  EXPECT_EQ(parse_instance(dump_instance(inst)), inst);
}

TEST(InstanceIo, RejectsInvertedTimeWindow) {
  try {
    (void)parse_instance(minimal_instance(R"("demand": 1, "earliest": 10, "latest": 5)"));
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "latest");
  }
}

TEST(InstanceIo, RejectsNonpositiveDemand) {
  EXPECT_THROW((void)parse_instance(minimal_instance(R"("demand": 0, "earliest": 0, "latest": 50)")), ValidationError);
}

TEST(InstanceIo, RejectsMalformedJson) { EXPECT_THROW((void)parse_instance("{\"network\": "), ValidationError); }

TEST(InstanceIo, AcceptsMinimalInstance) {
  const Instance inst = parse_instance(minimal_instance(R"("demand": 1, "earliest": 0, "latest": 50)"));
  EXPECT_EQ(inst.requests.size(), 1u);
  EXPECT_DOUBLE_EQ(inst.penalty(inst.requests[0]), inst.costs.penalty_per_unit);
}

TEST(Costs, DefaultsFollowFromEconomicParameters) {
  // Formulas evaluated independently of the library.
  const double design = 1.51e6 / (25.0 * 365.0 * std::pow(1.0362, 25.0));
  const CostModel c = derive_costs(EconomicParameters{});
  EXPECT_NEAR(c.design_cost, design, 1e-9);
  EXPECT_NEAR(c.design_cost, 68.18, 0.5);
  EXPECT_NEAR(c.penalty_per_unit, 0.2 * 80.0 / (100.0 / 12.0), 1e-12);
  EXPECT_NEAR(c.penalty_per_unit, 1.92, 1e-6);
  EXPECT_NEAR(c.egress_cost, 0.8418, 1e-6);
  EXPECT_NEAR(c.routing_rate, 0.0406, 1e-12);
}

TEST(Costs, RejectsNonpositiveParameters) {
  EconomicParameters e;
  e.truck_capacity = 0.0;
  EXPECT_THROW((void)derive_costs(e), ValidationError);
  e = EconomicParameters{};
  e.transit_cost = -1.0;
  EXPECT_THROW((void)derive_costs(e), ValidationError);
}

TEST(CapacitySampler, FollowsDistribution) {
  const CapacitySampler s;
  std::mt19937_64 rng(7);
  std::map<double, int> counts;
  const int n = 20000;
  for (int i = 0; i < n; ++i) ++counts[s.sample(rng)];
  ASSERT_EQ(counts.size(), 3u);
  EXPECT_NEAR(counts[870.0] / double(n), 0.52, 0.02);
  EXPECT_NEAR(counts[912.0] / double(n), 0.13, 0.02);
  EXPECT_NEAR(counts[936.0] / double(n), 0.35, 0.02);
}

TEST(Generator, SameSeedSameInstance) {
  for (const std::string& name : preset_names()) {
    const GeneratorConfig cfg = preset(name);
    EXPECT_EQ(dump_instance(generate_instance(cfg, 5)), dump_instance(generate_instance(cfg, 5))) << name;
    EXPECT_NE(dump_instance(generate_instance(cfg, 5)), dump_instance(generate_instance(cfg, 6))) << name;
  }
}

TEST(Generator, TinyPresetStaysTiny) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Instance inst = testing_support::tiny(seed);
    EXPECT_LE(inst.network.routes.size(), 3u);
    EXPECT_LE(inst.network.stops.size(), 8u);
    EXPECT_LE(inst.num_freight(), 6);
    EXPECT_LE(inst.num_passenger(), 4);
    EXPECT_NO_THROW(validate(inst));
  }
}

TEST(Generator, UnknownPresetListsKnownOnes) {
  try {
    (void)preset("huge");
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    for (const std::string& name : preset_names()) EXPECT_NE(msg.find(name), std::string::npos) << msg;
  }
}

TEST(Gtfs, ChainsTripsAtSharedStops) {
  GtfsOptions opts;
  opts.terminals = {"A", "C", "D"};
  const Network net = ingest_gtfs_subset(data_path("gtfs"), opts);
  ASSERT_EQ(net.stops.size(), 4u);
  // T1 ends at B where T2 starts, T4 later leaves C where T2 ends.
  std::map<std::string, std::vector<std::string>> by_id;
  for (const VehicleRoute& r : net.routes)
    for (const RouteStop& s : r.stops) by_id[r.id].push_back(net.stops[s.stop].id);
  ASSERT_EQ(net.routes.size(), 2u);
  EXPECT_EQ(by_id["T1"], (std::vector<std::string>{"A", "B", "C", "D"}));
  EXPECT_EQ(by_id["T3"], (std::vector<std::string>{"D", "A"}));
}

TEST(Gtfs, WindowDropsLateTrips) {
  GtfsOptions opts;
  opts.terminals = {"A", "C", "D"};
  opts.window_end = 12 * 3600;
  const Network net = ingest_gtfs_subset(data_path("gtfs"), opts);
  ASSERT_EQ(net.routes.size(), 2u);
  for (const VehicleRoute& r : net.routes)
    for (const RouteStop& s : r.stops) EXPECT_LE(s.time, 12 * 3600);
  EXPECT_EQ(net.routes[0].stops.size() + net.routes[1].stops.size(), 5u);
}

TEST(Gtfs, MissingDirectoryIsAnIngestError) {
  EXPECT_THROW((void)ingest_gtfs_subset(data_path("no-such-feed"), GtfsOptions{}), IngestError);
}

TEST(Gtfs, ConcatenationUsesEveryTripOnce) {
  std::vector<Trip> trips{{"a", {{0, 0}, {1, 10}}}, {"b", {{1, 12}, {2, 20}}}, {"c", {{2, 25}, {0, 40}}},
                          {"d", {{3, 0}, {4, 5}}}};
  const auto groups = concatenate_trips(trips);
  std::vector<int> seen(trips.size(), 0);
  for (const auto& g : groups)
    for (int t : g) ++seen[t];
  for (int s : seen) EXPECT_EQ(s, 1);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0], (std::vector<int>{0, 1, 2}));
}
