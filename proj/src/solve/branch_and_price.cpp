#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "cargohitch/solve.hpp"

namespace cargohitch {

namespace {

constexpr double kIntegrality = 1e-6;

struct Node {
  NodeBounds bounds;
  double parent_lb = -lp::kInfinity;
  int id = 0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.parent_lb != b.parent_lb) return a.parent_lb > b.parent_lb;
    return a.id > b.id;
  }
};

double fractionality(double v) {
  const double f = v - std::floor(v);
  return std::min(f, 1.0 - f);
}

// Most fractional entry (ties: first seen); `end` if all are integral.
template <typename It, typename Value>
auto most_fractional(It begin, It end, Value value) {
  auto best = end;
  double score = kIntegrality;
  for (auto it = begin; it != end; ++it) {
    const double s = fractionality(value(*it));
    if (s > score + 1e-12) {
      score = s;
      best = it;
    }
  }
  return best;
}

bool pruned(double lb, double ub) { return lb >= ub - 1e-9 * std::max(1.0, std::abs(ub)); }

}  // namespace

Solution branch_and_price(const ExpandedGraph& graph, const Instance& instance, const SolveConfig& config) {
  config.validate();
  const Deadline deadline(config.time_limit);
  const auto now = [&] { return config.record_timing ? deadline.elapsed() : 0.0; };
  MasterState master(graph, instance);
  Pricer pricer(graph, instance);
  pricer.observer = config.on_search;
  PricingState pricing(instance, config.phi);
  const int nv = static_cast<int>(instance.network.routes.size());
  const int nr = static_cast<int>(instance.requests.size());

  std::optional<Solution> fallback = all_rejected(master);
  if (!fallback) {
    Solution s;
    s.algorithm = "bnp";
    s.status = "infeasible";
    return s;
  }
  Solution incumbent = *fallback;
  double ub = incumbent.objective;
  auto offer = [&](Solution s) {
    if (s.objective < ub - 1e-9 * std::max(1.0, std::abs(ub))) {
      ub = s.objective;
      incumbent = std::move(s);
    }
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  int next_id = 0;
  {
    Node root;
    root.id = next_id++;
    root.bounds.y_lower.assign(nv, 0.0);
    for (int h = 0; h < nv; ++h) root.bounds.y_upper.push_back(instance.network.routes[h].units);
    root.bounds.restrictions.forbidden.assign(nr, {});
    root.bounds.restrictions.required.assign(nr, {});
    open.push(std::move(root));
  }
  auto open_lb = [&] { return open.empty() ? ub : std::min(ub, open.top().parent_lb); };

  std::vector<LogEntry> log;
  double global_lb = -lp::kInfinity;
  double closed_lb = lp::kInfinity;  // weakest bound among nodes closed within epsilon
  int iteration = 0;
  std::optional<lp::Basis> basis;
  bool aborted = false;

  while (!open.empty()) {
    if (deadline.expired()) {
      aborted = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (pruned(node.parent_lb, ub)) continue;
    ++iteration;

    const Deadline node_deadline(std::min(config.node_cg_time, deadline.remaining()));
    CgResult cg = column_generation(master, pricer, pricing, config, node_deadline, &node.bounds,
                                    basis ? &*basis : nullptr);
    auto report = [&] {
      global_lb = std::max(global_lb, open_lb());
      log.push_back({ub, global_lb, static_cast<int>(master.columns().size()), now()});
      if (config.on_bnp_iteration)
        config.on_bnp_iteration({iteration, global_lb, ub, static_cast<int>(open.size())});
    };
    if (cg.infeasible) {
      report();
      continue;
    }
    if (cg.lp.values.empty()) {
      // Out of time before the node's first LP solve: keep it open.
      open.push(std::move(node));
      report();
      continue;
    }
    basis = cg.lp.basis;
    if (auto repaired = repair_solution(master, cg.lp.values)) offer(std::move(*repaired));
    double node_lb = std::max(node.parent_lb, cg.had_full_round ? cg.lower_bound : -lp::kInfinity);
    if (pruned(node_lb, ub)) {
      report();
      continue;
    }

    const std::vector<double>& values = cg.lp.values;
    std::vector<double> y(nv);
    for (int h = 0; h < nv; ++h) y[h] = values[master.y_var(h)];
    const std::vector<int>& segments = graph.arcs_of(ArcClass::Segment);
    auto frac_x = most_fractional(segments.begin(), segments.end(), [&](int a) { return values[master.x_var(a)]; });
    // Flow of each freight request over each F-arc.
    std::map<std::pair<int, int>, double> usage;
    for (int r = 0; r < nr; ++r)
      for (int c : master.columns_of(r)) {
        const double z = values[master.column_var(c)];
        if (z <= 1e-12) continue;
        for (int a : master.columns()[c].arcs)
          if (graph.arcs[a].cls == ArcClass::Segment) usage[{r, a}] += z;
      }
    auto frac_use = most_fractional(usage.begin(), usage.end(), [](const auto& e) { return e.second; });
    const bool y_integral = std::all_of(y.begin(), y.end(), [](double v) { return fractionality(v) <= kIntegrality; });

    if (y_integral && frac_x == segments.end() && frac_use == usage.end()) {
      Solution s = solution_from_master(master, values);
      const double gap = std::max(0.0, s.objective - node_lb) / std::max(s.objective, 1e-10);
      offer(std::move(s));
      if (!cg.converged && gap <= config.epsilon) closed_lb = std::min(closed_lb, node_lb);
      if (gap > config.epsilon && !cg.converged) {
        // Integral but not yet proven: resume pricing on this node later.
        node.parent_lb = node_lb;
        node.id = next_id++;
        open.push(std::move(node));
      }
      report();
      continue;
    }

    // Node upper bound from the integer master over the current pool.
    if (!deadline.expired()) {
      lp::LinearProgram mip = master.integerize();
      std::vector<double> lower, upper;
      materialize_bounds(master, node.bounds, lower, upper);
      for (int j = 0; j < mip.num_variables(); ++j) mip.set_bounds(j, lower[j], upper[j]);
      lp::MipOptions opts;
      opts.time_limit = std::max(1e-3, std::min(config.node_ub_time, deadline.remaining()));
      opts.gap_tolerance = 1e-9;
      opts.warm_basis = cg.lp.basis;
      opts.cutoff = ub;
      const lp::MipSolution res = lp::branch_and_bound(mip, opts);
      if (res.has_incumbent) offer(solution_from_master(master, res.values));
    }
    if (pruned(node_lb, ub)) {
      report();
      continue;
    }

    Node left, right;
    left.bounds = right.bounds = node.bounds;
    left.parent_lb = right.parent_lb = node_lb;
    if (!y_integral) {
      const int h = select_branching_variable(y);
      left.bounds.y_upper[h] = std::floor(y[h]);
      right.bounds.y_lower[h] = std::ceil(y[h]);
    } else if (frac_x != segments.end()) {
      const int a = *frac_x;
      const double v = values[master.x_var(a)];
      auto bounds = node.bounds.x_bounds.count(a) ? node.bounds.x_bounds.at(a) : std::make_pair(0.0, lp::kInfinity);
      left.bounds.x_bounds[a] = {bounds.first, std::floor(v)};
      right.bounds.x_bounds[a] = {std::ceil(v), bounds.second};
    } else {
      const auto [r, a] = frac_use->first;
      left.bounds.restrictions.forbidden[r].push_back(a);
      right.bounds.restrictions.required[r].push_back(a);
    }
    left.id = next_id++;
    right.id = next_id++;
    open.push(std::move(left));
    open.push(std::move(right));
    report();
  }

  Solution s = incumbent;
  s.algorithm = "bnp";
  s.lower_bound = std::min(closed_lb, aborted ? std::min(ub, std::max(global_lb, open_lb())) : ub);
  s.gap = integrality_gap(s.objective, s.lower_bound);
  s.status = gap_status(s.gap, config.epsilon, aborted);
  log.push_back({s.objective, s.lower_bound, static_cast<int>(master.columns().size()), now()});
  s.log = std::move(log);
  s.nodes = iteration;
  s.columns = static_cast<int>(master.columns().size());
  s.wall_time = now();
  return s;
}

}  // namespace cargohitch
