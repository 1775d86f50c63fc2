#include <algorithm>
#include <cmath>
#include <deque>

#include <fmt/format.h>

#include "cargohitch/solve.hpp"

namespace cargohitch {

void materialize_bounds(const MasterState& master, const NodeBounds& node, std::vector<double>& lower,
                        std::vector<double>& upper) {
  lower = master.lower_bounds();
  upper = master.upper_bounds();
  const Instance& instance = master.instance();
  for (size_t h = 0; h < node.y_lower.size(); ++h) lower[master.y_var(static_cast<int>(h))] = node.y_lower[h];
  for (size_t h = 0; h < node.y_upper.size(); ++h) upper[master.y_var(static_cast<int>(h))] = node.y_upper[h];
  for (const auto& [a, b] : node.x_bounds) {
    lower[master.x_var(a)] = b.first;
    upper[master.x_var(a)] = b.second;
  }
  if (node.restrictions.empty()) return;
  for (size_t c = 0; c < master.columns().size(); ++c)
    if (!node.restrictions.allows(master.columns()[c])) upper[master.column_var(static_cast<int>(c))] = 0.0;
  // A request forced onto an arc loses its dummy path; the artificial keeps
  // the convexity row satisfiable until a real path is priced in.
  for (size_t r = 0; r < node.restrictions.required.size() && r < instance.requests.size(); ++r)
    if (!node.restrictions.required[r].empty()) upper[master.artificial_var(static_cast<int>(r))] = lp::kInfinity;
}

namespace {

double cg_gap(double value, double lb) {
  if (!std::isfinite(lb)) return lp::kInfinity;
  return std::max(0.0, value - lb) / std::max(value, 1e-10);
}

}  // namespace

CgResult column_generation(MasterState& master, const Pricer& pricer, PricingState& pricing, const SolveConfig& config,
                           const Deadline& deadline, const NodeBounds* node, const lp::Basis* warm_start) {
  CgResult res;
  const Instance& instance = master.instance();
  const ArcRestrictions* restrictions = node && !node->restrictions.empty() ? &node->restrictions : nullptr;
  std::optional<lp::Basis> basis;
  if (warm_start) basis = *warm_start;
  std::deque<double> gaps;  // recent optimality gaps, for the slowdown fallback
  bool force_full = false;
  std::vector<double> lower, upper;

  while (true) {
    ++res.iterations;
    lp::LpOptions opts;
    opts.time_limit = std::max(0.0, deadline.remaining());
    std::optional<lp::BoundOverride> override_bounds;
    if (node) {
      materialize_bounds(master, *node, lower, upper);
      override_bounds = lp::BoundOverride{lower, upper};
    }
    res.lp = lp::solve_lp(master.lp(), opts, basis ? &*basis : nullptr, override_bounds ? &*override_bounds : nullptr);
    if (res.lp.status == lp::LpStatus::Infeasible) {
      res.infeasible = true;
      return res;
    }
    if (res.lp.status == lp::LpStatus::TimeLimit) {
      res.timed_out = true;
      return res;
    }
    if (res.lp.status != lp::LpStatus::Optimal)
      throw lp::LpError(fmt::format("restricted master failed in column generation iteration {}: {}", res.iterations,
                                    lp::to_string(res.lp.status)));
    basis = res.lp.basis;
    res.value = res.lp.objective;
    res.duals = master.extract_duals(res.lp);

    const bool full = res.iterations == 1 || res.iterations % config.full_every == 0 || force_full;
    force_full = false;
    PricingRound round = pricing.run(pricer, res.duals, full, restrictions);
    if (!round.full && round.columns.empty()) round = pricing.run(pricer, res.duals, true, restrictions);
    if (round.full) {
      res.had_full_round = true;
      res.lower_bound = std::max(res.lower_bound, lagrangian_lower_bound(res.value, round));
    }
    const double gap = cg_gap(res.value, res.lower_bound);

    int added = 0;
    if (!round.columns.empty()) {
      std::vector<Column> cols;
      cols.reserve(round.columns.size());
      for (auto& p : round.columns) cols.push_back(std::move(p.column));
      added = master.add_columns(cols);
      res.columns_added += added;
    }
    const int pool = static_cast<int>(master.columns().size());
    res.log.push_back({res.value, res.lower_bound, pool, config.record_timing ? deadline.elapsed() : 0.0});
    if (config.on_cg_iteration) config.on_cg_iteration({res.iterations, round.full, res.value, res.lower_bound, pool});

    if (round.full && (round.columns.empty() || added == 0)) {
      res.converged = true;
      break;
    }
    if (gap <= config.epsilon) break;
    if (deadline.expired()) {
      res.timed_out = true;
      break;
    }
    if (std::isfinite(gap)) {
      gaps.push_back(gap);
      if (static_cast<int>(gaps.size()) > config.slowdown_window) {
        const double reduction = (gaps.front() - gaps.back()) / config.slowdown_window;
        gaps.pop_front();
        if (reduction < config.slowdown_threshold) {
          force_full = true;
          gaps.clear();
        }
      }
    }
  }
  if (res.converged) {
    for (size_t r = 0; r < instance.requests.size(); ++r) {
      const int art = master.artificial_var(static_cast<int>(r));
      if (art >= 0 && res.lp.values[art] > 1e-6) res.infeasible = true;
    }
  }
  return res;
}

}  // namespace cargohitch
