#pragma once

// Plain Dijkstra and a reverse variant over the freight arcs of an expanded
// graph. Used to cross-check the pricer's A* search.

#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "cargohitch/graph.hpp"

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Distances from `source` (forward) or to `source` (reverse) using per-arc
// costs; +inf costs mark unusable arcs.
inline std::vector<double> dijkstra(const cargohitch::ExpandedGraph& g, const std::vector<double>& cost, int source,
                                    bool reverse = false) {
  std::vector<double> dist(g.num_vertices(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (int a : reverse ? g.freight_in[v] : g.freight_out[v]) {
      if (!(cost[a] < kInf)) continue;
      const int w = reverse ? g.arcs[a].tail : g.arcs[a].head;
      if (d + cost[a] < dist[w]) {
        dist[w] = d + cost[a];
        heap.push({dist[w], w});
      }
    }
  }
  return dist;
}

}  // namespace oracle
