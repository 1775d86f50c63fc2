#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "cargohitch/pricing.hpp"

namespace cargohitch {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double reduced_cost(const Column& column, const DualValues& duals, const ExpandedGraph& graph,
                    const Instance& instance) {
  double adapted = 0.0;
  for (int a : column.arcs) {
    adapted += graph.arcs[a].cost;
    if (graph.arcs[a].cls == ArcClass::Segment) adapted -= duals.alpha[a];
  }
  return instance.requests[column.request].demand * adapted - duals.eta[column.request];
}

bool ArcRestrictions::empty() const {
  for (const auto& f : forbidden)
    if (!f.empty()) return false;
  for (const auto& r : required)
    if (!r.empty()) return false;
  return true;
}

bool ArcRestrictions::allows(const Column& column) const {
  const size_t r = static_cast<size_t>(column.request);
  auto uses = [&](int a) { return std::find(column.arcs.begin(), column.arcs.end(), a) != column.arcs.end(); };
  if (r < forbidden.size())
    for (int a : forbidden[r])
      if (uses(a)) return false;
  if (r < required.size())
    for (int a : required[r])
      if (!uses(a)) return false;
  return true;
}

Pricer::Pricer(const ExpandedGraph& graph, const Instance& instance)
    : graph_(graph), instance_(instance), static_costs_(precompute_static_costs(instance)) {
  heuristics_.resize(instance.requests.size());
  for (size_t r = 0; r < instance.requests.size(); ++r)
    if (instance.requests[r].is_freight()) heuristics_[r] = heuristic_w(graph, static_costs_, static_cast<int>(r));
}

std::optional<std::vector<int>> Pricer::search(int request, int source, int target, const std::vector<double>& cost,
                                               const std::vector<double>* h) const {
  const int n = graph_.num_vertices();
  std::vector<double> g(n, kInf);
  std::vector<int> pred(n, -1);
  auto estimate = [&](int v) { return h ? (*h)[v] : 0.0; };
  using Item = std::tuple<double, double, int>;  // (f, g, vertex)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  g[source] = 0.0;
  open.emplace(estimate(source), 0.0, source);
  bool reached = false;
  while (!open.empty()) {
    const auto [f, gv, v] = open.top();
    open.pop();
    if (gv > g[v]) continue;  // stale entry
    if (v == target) {
      reached = true;
      break;
    }
    for (int a : graph_.freight_out[v]) {
      if (!std::isfinite(cost[a])) continue;
      const int w = graph_.arcs[a].head;
      const double hw = estimate(w);
      if (!std::isfinite(hw)) continue;
      const double ng = gv + cost[a];
      // A shorter route to an already expanded vertex reopens it, which
      // keeps the search exact under an inconsistent heuristic.
      if (ng < g[w]) {
        g[w] = ng;
        pred[w] = a;
        open.emplace(ng + hw, ng, w);
      }
    }
  }
  if (observer) observer({request, source, target, &cost, reached ? g[target] : kInf});
  if (!reached) return std::nullopt;
  std::vector<int> path;
  for (int v = target; v != source; v = graph_.arcs[pred[v]].tail) path.push_back(pred[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<PricedPath> Pricer::best_path(const DualValues& duals, int r, const ArcRestrictions* restrictions) const {
  const Request& req = instance_.requests.at(r);
  if (!req.is_freight()) return std::nullopt;
  std::vector<double> cost(graph_.num_arcs(), kInf);
  for (int a : graph_.freight_arcs) {
    const Arc& arc = graph_.arcs[a];
    if (arc.request >= 0 && arc.request != r) continue;
    cost[a] = arc.cost - (arc.cls == ArcClass::Segment ? duals.alpha[a] : 0.0);
  }
  std::vector<int> required;
  if (restrictions) {
    if (static_cast<size_t>(r) < restrictions->forbidden.size())
      for (int a : restrictions->forbidden[r]) cost[a] = kInf;
    if (static_cast<size_t>(r) < restrictions->required.size()) required = restrictions->required[r];
  }
  // Required F-arcs strictly advance in time, so a restricted path is the
  // concatenation of shortest paths between them in time order.
  std::sort(required.begin(), required.end(), [&](int a, int b) {
    return std::make_pair(graph_.vertices[graph_.arcs[a].tail].time, a) <
           std::make_pair(graph_.vertices[graph_.arcs[b].tail].time, b);
  });
  std::vector<int> arcs;
  int at = graph_.origin[r];
  for (int a : required) {
    if (!std::isfinite(cost[a])) return std::nullopt;
    auto leg = search(r, at, graph_.arcs[a].tail, cost, nullptr);
    if (!leg) return std::nullopt;
    arcs.insert(arcs.end(), leg->begin(), leg->end());
    arcs.push_back(a);
    at = graph_.arcs[a].head;
  }
  auto last = search(r, at, graph_.destination[r], cost, &heuristics_[r]);
  if (!last) return std::nullopt;
  arcs.insert(arcs.end(), last->begin(), last->end());
  PricedPath out{make_column(graph_, r, std::move(arcs)), 0.0};
  out.reduced_cost = reduced_cost(out.column, duals, graph_, instance_);
  return out;
}

std::optional<PricedPath> Pricer::price_request(const DualValues& duals, int r,
                                                const ArcRestrictions* restrictions) const {
  auto p = best_path(duals, r, restrictions);
  if (!p || p->reduced_cost >= kNegativeReducedCost) return std::nullopt;
  return p;
}

PricingState::PricingState(const Instance& instance, double phi)
    : phi_(phi), num_requests_(static_cast<int>(instance.requests.size())) {
  if (!(phi > 0.0 && phi <= 1.0)) throw std::invalid_argument("pricing strength must lie in (0, 1]");
  for (int r = 0; r < num_requests_; ++r)
    if (instance.requests[r].is_freight()) queue_.push_back(r);
  num_freight_ = static_cast<int>(queue_.size());
}

int PricingState::quota() const { return static_cast<int>(std::ceil(phi_ * num_freight_ - 1e-12)); }

PricingRound PricingState::run(const Pricer& pricer, const DualValues& duals, bool full,
                               const ArcRestrictions* restrictions) {
  PricingRound round;
  round.full = full;
  round.min_reduced_cost.assign(num_requests_, 0.0);
  const int limit = full ? num_freight_ + 1 : quota();
  while (round.solved < num_freight_ && static_cast<int>(round.columns.size()) < limit) {
    const int r = queue_.front();
    queue_.pop_front();
    queue_.push_back(r);
    ++round.solved;
    auto p = pricer.best_path(duals, r, restrictions);
    if (!p) {
      round.min_reduced_cost[r] = kInf;
      continue;
    }
    round.min_reduced_cost[r] = p->reduced_cost;
    if (p->reduced_cost < kNegativeReducedCost) round.columns.push_back(std::move(*p));
  }
  return round;
}

double lagrangian_lower_bound(double rmp_value, const std::vector<double>& min_reduced_costs) {
  double lb = rmp_value;
  for (double c : min_reduced_costs) lb += std::min(0.0, c);
  return lb;
}

double lagrangian_lower_bound(double rmp_value, const PricingRound& round) {
  if (!round.full) throw BoundError("the Lagrangian bound needs a full pricing round");
  return lagrangian_lower_bound(rmp_value, round.min_reduced_cost);
}

}  // namespace cargohitch
