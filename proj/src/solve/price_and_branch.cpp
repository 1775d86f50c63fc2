#include <algorithm>
#include <cmath>

#include "cargohitch/solve.hpp"

namespace cargohitch {

namespace {

Solution infeasible_solution(const char* algorithm) {
  Solution s;
  s.algorithm = algorithm;
  s.status = "infeasible";
  return s;
}

// Walk the unit flow of request r from origin to destination, cutting out
// any zero-cost loops the MIP left in its support.
std::vector<int> trace_flow(const ExpandedGraph& graph, const ArcMip& mip, int r, std::span<const double> values,
                            std::span<const int> position) {
  std::vector<int> walk;
  std::vector<char> used(graph.num_arcs(), 0);
  int at = graph.origin[r];
  while (at != graph.destination[r]) {
    int next = -1;
    for (int a : graph.freight_out[at])
      if (!used[a] && values[mip.f[r][position[a]]] > 0.5) {
        next = a;
        break;
      }
    if (next < 0) throw std::logic_error("arc MIP flow does not reach the destination");
    used[next] = 1;
    walk.push_back(next);
    at = graph.arcs[next].head;
  }
  std::vector<int> path;
  for (int a : walk) {
    const int tail = graph.arcs[a].tail;
    auto loop = std::find_if(path.begin(), path.end(), [&](int b) { return graph.arcs[b].tail == tail; });
    path.erase(loop, path.end());
    path.push_back(a);
  }
  return path;
}

}  // namespace

Solution solve_arc_mip(const ExpandedGraph& graph, const Instance& instance, const SolveConfig& config) {
  config.validate();
  const Deadline deadline(config.time_limit);
  const ArcMip mip = build_arc_mip(graph, instance);
  Solution s;
  s.algorithm = "mip";
  lp::MipOptions opts;
  opts.time_limit = config.time_limit;
  opts.gap_tolerance = 1e-9;
  std::vector<LogEntry> log;
  opts.observer = [&](const lp::MipProgress& p) {
    if (!log.empty() && log.back().ub == p.incumbent && log.back().lb == p.best_bound) return;
    log.push_back({p.incumbent, p.best_bound, p.node, config.record_timing ? deadline.elapsed() : 0.0});
  };
  const lp::MipSolution res = lp::branch_and_bound(mip.lp, opts);
  if (!res.has_incumbent) {
    // Out of time without an integer point: report the all-rejected plan.
    std::optional<Solution> fallback;
    if (res.status != lp::MipStatus::Infeasible) fallback = all_rejected(MasterState(graph, instance));
    Solution out = fallback ? *fallback : infeasible_solution("mip");
    out.algorithm = "mip";
    if (fallback) {
      out.lower_bound = std::min(res.bound, out.objective);
      out.gap = std::isfinite(out.lower_bound) ? integrality_gap(out.objective, out.lower_bound) : lp::kInfinity;
      out.status = "time_limit";
    }
    out.log = std::move(log);
    out.nodes = res.nodes;
    out.columns = 0;
    out.wall_time = config.record_timing ? deadline.elapsed() : 0.0;
    return out;
  }
  std::vector<int> position(graph.num_arcs(), -1);
  for (size_t k = 0; k < graph.freight_arcs.size(); ++k) position[graph.freight_arcs[k]] = static_cast<int>(k);
  for (size_t h = 0; h < mip.y.size(); ++h) s.y.push_back(static_cast<int>(std::lround(res.values[mip.y[h]])));
  for (int a : graph.arcs_of(ArcClass::Segment)) {
    const long units = std::lround(res.values[mip.x[a]]);
    if (units > 0) s.x[a] = static_cast<int>(units);
  }
  s.g.assign(instance.requests.size(), {});
  for (size_t r = 0; r < instance.requests.size(); ++r) {
    for (int var : mip.g[r]) s.g[r].push_back(std::max(0.0, res.values[var]));
    if (!instance.requests[r].is_freight()) continue;
    const int ri = static_cast<int>(r);
    std::vector<int> path = trace_flow(graph, mip, ri, res.values, position);
    if (path.size() == 1 && path[0] == graph.dummy[r])
      s.rejected.push_back(ri);
    else
      s.paths[ri] = std::move(path);
  }
  s.objective = evaluate_objective(s, graph, instance);
  s.lower_bound = std::min(res.bound, s.objective);
  s.gap = integrality_gap(s.objective, s.lower_bound);
  s.status = res.status == lp::MipStatus::Optimal ? "optimal" : gap_status(s.gap, config.epsilon, deadline.expired());
  log.push_back({s.objective, s.lower_bound, res.nodes, config.record_timing ? deadline.elapsed() : 0.0});
  s.log = std::move(log);
  s.nodes = res.nodes;
  s.wall_time = config.record_timing ? deadline.elapsed() : 0.0;
  return s;
}

Solution price_and_branch(const ExpandedGraph& graph, const Instance& instance, const SolveConfig& config) {
  config.validate();
  const Deadline deadline(config.time_limit);
  MasterState master(graph, instance);
  Pricer pricer(graph, instance);
  pricer.observer = config.on_search;
  PricingState pricing(instance, config.phi);

  std::optional<Solution> fallback = all_rejected(master);
  if (!fallback) return infeasible_solution("pnb");

  // Pricing phase, then a single integer solve over the final pool.
  const Deadline pricing_deadline(config.time_limit - config.branch_reserve);
  CgResult cg = column_generation(master, pricer, pricing, config, pricing_deadline);
  Solution start = *fallback;
  if (!cg.lp.values.empty())
    if (auto repaired = repair_solution(master, cg.lp.values); repaired && repaired->objective < start.objective)
      start = std::move(*repaired);
  lp::MipOptions opts;
  opts.time_limit = std::max(1e-3, deadline.remaining());
  opts.gap_tolerance = 1e-9;
  opts.start_point = master_point(master, start);
  if (!cg.lp.basis.empty()) opts.warm_basis = cg.lp.basis;
  const lp::MipSolution mip = lp::branch_and_bound(master.integerize(), opts);

  Solution s = mip.has_incumbent ? solution_from_master(master, mip.values) : start;
  if (start.objective < s.objective) s = start;
  s.algorithm = "pnb";
  s.lower_bound = cg.had_full_round ? std::min(cg.lower_bound, s.objective) : -lp::kInfinity;
  s.gap = std::isfinite(s.lower_bound) ? integrality_gap(s.objective, s.lower_bound) : lp::kInfinity;
  s.status = gap_status(s.gap, config.epsilon, deadline.expired() || cg.timed_out);
  s.log = std::move(cg.log);
  s.log.push_back({s.objective, s.lower_bound, static_cast<int>(master.columns().size()),
                   config.record_timing ? deadline.elapsed() : 0.0});
  s.nodes = mip.nodes;
  s.columns = static_cast<int>(master.columns().size());
  s.wall_time = config.record_timing ? deadline.elapsed() : 0.0;
  return s;
}

}  // namespace cargohitch
