#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "cargohitch/model.hpp"

namespace cargohitch {

enum class VertexKind : std::uint8_t { Origin, Destination, Stop };

struct Vertex {
  VertexKind kind = VertexKind::Stop;
  int request = -1;  // Origin/Destination only
  int stop = -1;     // Stop only
  int time = 0;      // e^r for origins, l^r for destinations
  int layer = 0;     // 0 = holding layer, h + 1 = layer of vehicle h
};

enum class ArcClass : std::uint8_t { Vehicle, Holding, Transit, Access, Egress, Dummy, Segment };

[[nodiscard]] const char* to_string(ArcClass cls);

struct Arc {
  int tail = -1;
  int head = -1;
  ArcClass cls = ArcClass::Vehicle;
  double cost = 0.0;  // per passenger equivalent
  int vehicle = -1;   // Vehicle and Segment arcs
  int request = -1;   // Access, Egress and Dummy arcs
};

// One precomputed itinerary of a passenger request. Access and egress walks
// are not part of the graph once preprocessing is done; they are recorded
// here by stop and time.
struct PassengerPath {
  std::vector<int> arcs;          // vehicle, holding and transit arcs in travel order
  std::vector<int> vehicle_arcs;  // the subset in the vehicle layers
  int access_stop = -1;
  int egress_stop = -1;
  double start = 0.0;  // leaves the origin
  double end = 0.0;    // reaches the destination
  [[nodiscard]] double travel_time() const { return end - start; }
};

// Multi-layer partially time-expanded graph. Built in stages (expand, passenger
// paths, dummy arcs, contraction, pruning) and then finalized, which drops
// removed vertices/arcs and fills the derived sets below.
struct ExpandedGraph {
  std::vector<Vertex> vertices;
  std::vector<Arc> arcs;
  std::vector<char> vertex_alive;
  std::vector<char> arc_alive;

  std::vector<int> origin;       // per request, -1 once removed
  std::vector<int> destination;  // per request, -1 once removed
  std::vector<int> dummy;        // per request, -1 for passengers
  std::vector<int> segment_of;   // mu: per arc, F-arc of a contracted V-arc or -1
  std::vector<std::vector<int>> contracted;  // per arc, V-arcs inside an F-arc
  std::vector<std::vector<PassengerPath>> passenger_paths;  // per request

  // Filled by finalize().
  bool finalized = false;
  std::vector<char> terminal_vertex;  // membership in the FT representation set
  std::vector<std::vector<int>> by_class;  // indexed by ArcClass
  std::vector<int> contracted_arcs;        // V-arcs inside some F-arc
  std::vector<int> uncontracted_arcs;      // the remaining V-arcs
  std::vector<int> freight_arcs;           // arcs usable by freight flow
  std::vector<char> in_freight;            // per arc
  std::vector<std::vector<int>> freight_out;
  std::vector<std::vector<int>> freight_in;

  [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices.size()); }
  [[nodiscard]] int num_arcs() const { return static_cast<int>(arcs.size()); }
  [[nodiscard]] const std::vector<int>& arcs_of(ArcClass cls) const { return by_class[static_cast<int>(cls)]; }
  /// -1 if absent.
  [[nodiscard]] int find_vertex(int stop, int time, int layer) const;

  // Stable textual keys: "s1@2@1" for stops, "o:f1@0" / "d:f1@6" for request
  // endpoints, "F:s1@2@1>s2@3@1" for arcs.
  [[nodiscard]] std::string vertex_key(const Instance& instance, int v) const;
  [[nodiscard]] std::string arc_key(const Instance& instance, int a) const;

  /// Node/arc listing in stable order.
  [[nodiscard]] std::string to_json(const Instance& instance) const;

  std::map<std::tuple<int, int, int>, int> stop_index;  // (stop, time, layer) -> vertex
};

// Pipeline stages. build_graph() runs all of them in order.
[[nodiscard]] ExpandedGraph expand(const Instance& instance);
void precompute_passenger_paths(ExpandedGraph& graph, const Instance& instance);
void add_dummy_arcs(ExpandedGraph& graph, const Instance& instance);
void contract_segments(ExpandedGraph& graph, const Instance& instance);
/// Returns the ids of freight requests left without access or egress arcs.
std::vector<std::string> prune_access_egress(ExpandedGraph& graph, const Instance& instance);
void finalize(ExpandedGraph& graph, const Instance& instance);
[[nodiscard]] ExpandedGraph build_graph(const Instance& instance);

// Lower bounds on routing cost between freight terminals in the
// time-collapsed stop network.
struct StaticCosts {
  std::vector<int> terminals;              // stop indices
  std::vector<int> terminal_slot;          // per stop, index into terminals or -1
  std::vector<std::vector<double>> table;  // [from slot][to slot], inf if unreachable
  [[nodiscard]] double operator()(int from_stop, int to_stop) const;
};

[[nodiscard]] StaticCosts precompute_static_costs(const Instance& instance);

/// Admissible per-vertex estimate of the remaining per-unit cost to the
/// request's destination over freight arcs; +inf where none is known.
[[nodiscard]] std::vector<double> heuristic_w(const ExpandedGraph& graph, const StaticCosts& costs, int request);

}  // namespace cargohitch
