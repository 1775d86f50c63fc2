#include <algorithm>
#include <limits>
#include <queue>

#include "cargohitch/graph.hpp"

namespace cargohitch {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double StaticCosts::operator()(int from_stop, int to_stop) const {
  const int a = terminal_slot.at(from_stop), b = terminal_slot.at(to_stop);
  if (a < 0 || b < 0) return from_stop == to_stop ? 0.0 : kInf;
  return table[a][b];
}

StaticCosts precompute_static_costs(const Instance& instance) {
  const Network& net = instance.network;
  const int n = static_cast<int>(net.stops.size());
  // Time-collapsed stop graph, cheapest vehicle arc per directed stop pair.
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const VehicleRoute& r : net.routes) {
    for (size_t l = 1; l < r.stops.size(); ++l) {
      const int a = r.stops[l - 1].stop, b = r.stops[l].stop;
      const double c = instance.costs.routing_rate * net.distance_km(a, b);
      auto it = std::find_if(adj[a].begin(), adj[a].end(), [&](const auto& e) { return e.first == b; });
      if (it == adj[a].end()) adj[a].emplace_back(b, c);
      else it->second = std::min(it->second, c);
    }
  }
  StaticCosts out;
  out.terminals = net.terminals;
  out.terminal_slot.assign(n, -1);
  for (size_t i = 0; i < net.terminals.size(); ++i) out.terminal_slot[net.terminals[i]] = static_cast<int>(i);
  out.table.assign(net.terminals.size(), std::vector<double>(net.terminals.size(), kInf));
  for (size_t i = 0; i < net.terminals.size(); ++i) {
    std::vector<double> dist(n, kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[net.terminals[i]] = 0.0;
    heap.emplace(0.0, net.terminals[i]);
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[v]) continue;
      for (const auto& [w, c] : adj[v]) {
        if (d + c < dist[w]) {
          dist[w] = d + c;
          heap.emplace(dist[w], w);
        }
      }
    }
    for (size_t j = 0; j < net.terminals.size(); ++j) out.table[i][j] = dist[net.terminals[j]];
  }
  return out;
}

std::vector<double> heuristic_w(const ExpandedGraph& g, const StaticCosts& costs, int r) {
  std::vector<double> h(g.vertices.size(), kInf);
  const int dest = g.destination.at(r);
  if (dest < 0) return h;
  h[dest] = 0.0;
  std::vector<std::pair<int, double>> exits;  // (stop, egress cost)
  for (int a : g.freight_in[dest])
    if (g.arcs[a].cls == ArcClass::Egress) exits.emplace_back(g.vertices[g.arcs[a].tail].stop, g.arcs[a].cost);
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!g.terminal_vertex[v]) continue;
    for (const auto& [stop, cost] : exits) h[v] = std::min(h[v], costs(g.vertices[v].stop, stop) + cost);
  }
  const int origin = g.origin.at(r);
  for (int a : g.freight_out[origin]) {
    const Arc& arc = g.arcs[a];
    if (arc.cls == ArcClass::Dummy) h[origin] = std::min(h[origin], arc.cost);
    if (arc.cls == ArcClass::Access) h[origin] = std::min(h[origin], arc.cost + h[arc.head]);
  }
  return h;
}

}  // namespace cargohitch
