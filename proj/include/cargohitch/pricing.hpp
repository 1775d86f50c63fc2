#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "cargohitch/formulations.hpp"
#include "cargohitch/graph.hpp"

namespace cargohitch {

inline constexpr double kNegativeReducedCost = -1e-9;

/// q^r * (sum of arc costs - sum of alpha over its F-arcs) - eta^r.
[[nodiscard]] double reduced_cost(const Column& column, const DualValues& duals, const ExpandedGraph& graph,
                                  const Instance& instance);

// Per-request branching restrictions on F-arc usage.
struct ArcRestrictions {
  std::vector<std::vector<int>> forbidden;  // per request
  std::vector<std::vector<int>> required;   // per request
  [[nodiscard]] bool empty() const;
  /// Whether a column obeys the restrictions of its request.
  [[nodiscard]] bool allows(const Column& column) const;
};

// One shortest-path search issued by the pricer. `cost` holds the adapted
// per-unit arc costs (+inf for unusable arcs) over the whole graph.
struct SearchRecord {
  int request = -1;
  int source = -1;
  int target = -1;
  const std::vector<double>* cost = nullptr;
  double result = 0.0;  // +inf when the target is unreachable
};

struct PricedPath {
  Column column;
  double reduced_cost = 0.0;
};

class Pricer {
 public:
  Pricer(const ExpandedGraph& graph, const Instance& instance);

  /// Minimum reduced-cost path of the request, whether negative or not.
  /// Empty only if restrictions make the request unroutable.
  [[nodiscard]] std::optional<PricedPath> best_path(const DualValues& duals, int request,
                                                    const ArcRestrictions* restrictions = nullptr) const;

  /// best_path() filtered to reduced cost below -1e-9.
  [[nodiscard]] std::optional<PricedPath> price_request(const DualValues& duals, int request,
                                                        const ArcRestrictions* restrictions = nullptr) const;

  [[nodiscard]] const std::vector<double>& heuristic(int request) const { return heuristics_[request]; }

  /// Called after every search, for verification.
  std::function<void(const SearchRecord&)> observer;

 private:
  // A* from source to target with reopening; returns the arc path or
  // nothing if unreachable.
  std::optional<std::vector<int>> search(int request, int source, int target, const std::vector<double>& cost,
                                         const std::vector<double>* h) const;

  const ExpandedGraph& graph_;
  const Instance& instance_;
  StaticCosts static_costs_;
  std::vector<std::vector<double>> heuristics_;
};

struct PricingRound {
  std::vector<PricedPath> columns;  // negative reduced cost, in queue order
  int solved = 0;
  bool full = false;
  std::vector<double> min_reduced_cost;  // per request; meaningful on full rounds
};

// Partial-pricing scheduler: a persistent request queue, solved requests
// rotate to the back.
class PricingState {
 public:
  PricingState(const Instance& instance, double phi);

  [[nodiscard]] double phi() const { return phi_; }
  [[nodiscard]] const std::deque<int>& queue() const { return queue_; }
  /// Negative columns a partial round may collect: ceil(phi * |R_F|).
  [[nodiscard]] int quota() const;

  PricingRound run(const Pricer& pricer, const DualValues& duals, bool full,
                   const ArcRestrictions* restrictions = nullptr);

 private:
  double phi_;
  int num_freight_ = 0;
  int num_requests_ = 0;
  std::deque<int> queue_;
};

class BoundError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// rmp_value + sum of min(0, c_r) over freight requests. Only valid after a
/// full round; throws BoundError otherwise.
[[nodiscard]] double lagrangian_lower_bound(double rmp_value, const PricingRound& round);
[[nodiscard]] double lagrangian_lower_bound(double rmp_value, const std::vector<double>& min_reduced_costs);

}  // namespace cargohitch
