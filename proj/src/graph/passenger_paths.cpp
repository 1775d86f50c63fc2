#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <tuple>

#include "cargohitch/graph.hpp"

namespace cargohitch {
namespace {

struct Path {
  double weight = 0.0;
  std::vector<int> arcs;
  std::vector<int> vertices;
};

bool same_weight(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= 1e-9 * (1.0 + std::max(std::abs(a), std::abs(b)));
}

// Travel time first, then fewer arcs, then lexicographic vertex ids.
bool shorter(const Path& a, const Path& b) {
  if (!same_weight(a.weight, b.weight)) return a.weight < b.weight;
  if (a.arcs.size() != b.arcs.size()) return a.arcs.size() < b.arcs.size();
  return a.vertices < b.vertices;
}

class PassengerSearch {
 public:
  PassengerSearch(const ExpandedGraph& g, const Instance& instance, int request)
      : g_(g), instance_(instance), request_(request), out_(2 * g.vertices.size()) {
    // State (v, boarded) is vertex 2v + boarded; egress needs a ride first, so
    // walk-only itineraries never appear.
    for (int a = 0; a < g.num_arcs(); ++a) {
      if (!allowed(a)) continue;
      const Arc& arc = g.arcs[a];
      for (int b = 0; b < 2; ++b) {
        if (arc.cls == ArcClass::Egress && !b) continue;
        const int nb = b || arc.cls == ArcClass::Vehicle;
        links_.push_back({a, 2 * arc.tail + b, 2 * arc.head + nb});
        out_[2 * arc.tail + b].push_back(static_cast<int>(links_.size()) - 1);
      }
    }
  }

  int state(int v, bool boarded) const { return 2 * v + (boarded ? 1 : 0); }
  int arc_of(int link) const { return links_[link].arc; }

  std::vector<Path> k_shortest(int source, int target, int k) {
    std::vector<Path> found;
    std::vector<Path> candidates;
    std::vector<char> blocked_vertex(out_.size(), 0);
    std::vector<char> blocked_arc(links_.size(), 0);
    auto first = shortest(source, target, blocked_vertex, blocked_arc);
    if (!first) return found;
    found.push_back(std::move(*first));
    while (static_cast<int>(found.size()) < k) {
      const Path prev = found.back();
      for (size_t i = 0; i < prev.arcs.size(); ++i) {
        const int spur = prev.vertices[i];
        std::fill(blocked_vertex.begin(), blocked_vertex.end(), 0);
        std::fill(blocked_arc.begin(), blocked_arc.end(), 0);
        for (const Path& p : found)
          if (p.vertices.size() > i && std::equal(prev.vertices.begin(), prev.vertices.begin() + i + 1, p.vertices.begin()))
            blocked_arc[p.arcs[i]] = 1;
        for (size_t j = 0; j < i; ++j) blocked_vertex[prev.vertices[j]] = 1;
        auto tail = shortest(spur, target, blocked_vertex, blocked_arc);
        if (!tail) continue;
        Path total;
        total.arcs.assign(prev.arcs.begin(), prev.arcs.begin() + i);
        total.vertices.assign(prev.vertices.begin(), prev.vertices.begin() + i);
        for (int l : total.arcs) total.weight += weight(links_[l].arc);
        total.weight += tail->weight;
        total.arcs.insert(total.arcs.end(), tail->arcs.begin(), tail->arcs.end());
        total.vertices.insert(total.vertices.end(), tail->vertices.begin(), tail->vertices.end());
        auto same_arcs = [&](const Path& p) { return p.arcs == total.arcs; };
        if (std::none_of(found.begin(), found.end(), same_arcs) &&
            std::none_of(candidates.begin(), candidates.end(), same_arcs))
          candidates.push_back(std::move(total));
      }
      if (candidates.empty()) break;
      auto best = std::min_element(candidates.begin(), candidates.end(), shorter);
      found.push_back(std::move(*best));
      candidates.erase(best);
    }
    return found;
  }

  double weight(int a) const {
    const Arc& arc = g_.arcs[a];
    const Request& req = instance_.requests[request_];
    switch (arc.cls) {
      case ArcClass::Access:
        return euclidean(req.origin, instance_.network.stops[g_.vertices[arc.head].stop].position) /
               instance_.params.walk_speed;
      case ArcClass::Egress:
        return euclidean(instance_.network.stops[g_.vertices[arc.tail].stop].position, req.destination) /
               instance_.params.walk_speed;
      case ArcClass::Vehicle:
      case ArcClass::Holding: return g_.vertices[arc.head].time - g_.vertices[arc.tail].time;
      default: return 0.0;
    }
  }

 private:
  struct Link {
    int arc;
    int tail;
    int head;
  };

  bool allowed(int a) const {
    if (!g_.arc_alive[a]) return false;
    const Arc& arc = g_.arcs[a];
    switch (arc.cls) {
      case ArcClass::Vehicle:
      case ArcClass::Holding:
      case ArcClass::Transit: return true;
      case ArcClass::Access:
      case ArcClass::Egress: return arc.request == request_;
      default: return false;
    }
  }

  std::optional<Path> shortest(int source, int target, const std::vector<char>& blocked_vertex,
                               const std::vector<char>& blocked_arc) const {
    const size_t n = out_.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> hops(n, 0), pred(n, -1);
    std::vector<char> done(n, 0);
    using Item = std::tuple<double, int, int>;  // (dist, hops, vertex)
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, 0, source);
    while (!heap.empty()) {
      const auto [d, h, v] = heap.top();
      heap.pop();
      if (done[v]) continue;
      done[v] = 1;
      if (v == target) break;
      for (int a : out_[v]) {
        const int w = links_[a].head;
        if (blocked_arc[a] || blocked_vertex[w] || done[w]) continue;
        const double nd = d + weight(links_[a].arc);
        const bool better = same_weight(nd, dist[w]) ? h + 1 < hops[w] : nd < dist[w];
        if (!better) continue;
        dist[w] = nd;
        hops[w] = h + 1;
        pred[w] = a;
        heap.emplace(nd, h + 1, w);
      }
    }
    if (!done[target]) return std::nullopt;
    Path p;
    p.weight = dist[target];
    for (int v = target; v != source; v = links_[pred[v]].tail) p.arcs.push_back(pred[v]);
    std::reverse(p.arcs.begin(), p.arcs.end());
    p.vertices.push_back(source);
    for (int a : p.arcs) p.vertices.push_back(links_[a].head);
    return p;
  }

  const ExpandedGraph& g_;
  const Instance& instance_;
  int request_;
  std::vector<Link> links_;
  std::vector<std::vector<int>> out_;  // per state, outgoing links
};

}  // namespace

void precompute_passenger_paths(ExpandedGraph& g, const Instance& instance) {
  if (g.finalized) throw std::logic_error("precompute_passenger_paths called on a finalized graph");
  for (size_t r = 0; r < instance.requests.size(); ++r) {
    const Request& req = instance.requests[r];
    if (req.is_freight() || g.origin[r] < 0) continue;
    PassengerSearch search(g, instance, static_cast<int>(r));
    g.passenger_paths[r].clear();
    for (const Path& p : search.k_shortest(search.state(g.origin[r], false), search.state(g.destination[r], true),
                                           instance.params.k)) {
      PassengerPath out;
      const int first = search.arc_of(p.arcs.front()), last = search.arc_of(p.arcs.back());
      out.access_stop = g.vertices[g.arcs[first].head].stop;
      out.egress_stop = g.vertices[g.arcs[last].tail].stop;
      out.start = g.vertices[g.arcs[first].head].time - search.weight(first);
      out.end = g.vertices[g.arcs[last].tail].time + search.weight(last);
      for (size_t i = 1; i + 1 < p.arcs.size(); ++i) {
        const int a = search.arc_of(p.arcs[i]);
        out.arcs.push_back(a);
        if (g.arcs[a].cls == ArcClass::Vehicle) out.vehicle_arcs.push_back(a);
      }
      g.passenger_paths[r].push_back(std::move(out));
    }
    // Passenger endpoints leave the graph; their itineraries live on above.
    g.vertex_alive[g.origin[r]] = 0;
    g.vertex_alive[g.destination[r]] = 0;
  }
}

}  // namespace cargohitch
