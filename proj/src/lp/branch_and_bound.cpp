#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <queue>

#include "cargohitch/lp.hpp"

namespace cargohitch::lp {

double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent)) return kInfinity;
  if (!std::isfinite(bound)) return kInfinity;
  return std::max(0.0, incumbent - bound) / std::max(std::abs(incumbent), 1e-10);
}

namespace {

struct BoundChange {
  int var;
  double lower;
  double upper;
};

struct Node {
  int id = 0;
  double bound = -kInfinity;
  std::vector<BoundChange> changes;
  std::shared_ptr<const Basis> basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const LinearProgram& mip, const MipOptions& options) : mip_(mip), options_(options) {
    const int n = mip.num_variables();
    root_lower_.resize(n);
    root_upper_.resize(n);
    for (int j = 0; j < n; ++j) {
      root_lower_[j] = mip.variable(j).lower;
      root_upper_[j] = mip.variable(j).upper;
      if (mip.variable(j).integer) {
        root_lower_[j] = std::ceil(root_lower_[j] - options.integrality_tolerance);
        root_upper_[j] = std::floor(root_upper_[j] + options.integrality_tolerance);
      }
    }
  }

  MipSolution run() {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

    MipSolution out;
    if (options_.start_point) try_incumbent(*options_.start_point, out);

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    Node root;
    if (options_.warm_basis) root.basis = std::make_shared<Basis>(*options_.warm_basis);
    open.push(std::move(root));
    int next_id = 1;
    bool limit_hit = false;
    MipStatus limit_status = MipStatus::TimeLimit;
    bool numerical = false;

    std::vector<double> lower, upper;
    // Until an incumbent exists, dive: keep processing the child in the
    // rounding direction instead of returning to the best bound.
    std::optional<Node> dive;
    while (!open.empty() || dive) {
      const double global_bound =
          open.empty() ? dive->bound : (dive ? std::min(dive->bound, open.top().bound) : open.top().bound);
      if (!improves(global_bound, target(out))) break;
      if (elapsed() > options_.time_limit) {
        limit_hit = true;
        limit_status = MipStatus::TimeLimit;
        break;
      }
      if (out.nodes >= options_.max_nodes) {
        limit_hit = true;
        limit_status = MipStatus::NodeLimit;
        break;
      }

      Node node;
      if (dive) {
        node = std::move(*dive);
        dive.reset();
      } else {
        node = open.top();
        open.pop();
      }
      ++out.nodes;

      lower = root_lower_;
      upper = root_upper_;
      for (const BoundChange& c : node.changes) {
        lower[c.var] = std::max(lower[c.var], c.lower);
        upper[c.var] = std::min(upper[c.var], c.upper);
      }
      BoundOverride override{lower, upper};
      LpOptions lp_options = options_.lp;
      if (std::isfinite(options_.time_limit)) lp_options.time_limit = std::max(0.0, options_.time_limit - elapsed());
      LpSolution lp = solve_lp(mip_, lp_options, node.basis.get(), &override);

      if (lp.status == LpStatus::Infeasible) {
        report(open, out);
        continue;
      }
      if (lp.status == LpStatus::Unbounded) {
        if (node.changes.empty() && !out.has_incumbent) {
          out.status = MipStatus::Unbounded;
          return out;
        }
        numerical = true;
        continue;
      }
      if (lp.status == LpStatus::TimeLimit) {
        open.push(std::move(node));
        limit_hit = true;
        limit_status = MipStatus::TimeLimit;
        break;
      }
      if (lp.status != LpStatus::Optimal) {
        numerical = true;
        open.push(std::move(node));
        limit_hit = true;
        limit_status = MipStatus::NumericalFailure;
        break;
      }

      const double node_bound = std::max(node.bound, lp.objective);
      if (!improves(node_bound, target(out))) {
        report(open, out);
        continue;
      }

      const int branch_var = most_fractional(lp.values);
      if (branch_var < 0) {
        try_incumbent(lp.values, out);
        report(open, out);
        continue;
      }
      auto basis = std::make_shared<const Basis>(std::move(lp.basis));
      round_heuristic(lp.values, lower, upper, *basis, out);
      const double v = lp.values[branch_var];
      Node down{next_id++, node_bound, node.changes, basis};
      down.changes.push_back({branch_var, -kInfinity, std::floor(v)});
      Node up{next_id++, node_bound, node.changes, basis};
      up.changes.push_back({branch_var, std::ceil(v), kInfinity});
      if (!out.has_incumbent) {
        const bool go_up = v - std::floor(v) >= 0.5;
        dive = go_up ? std::move(up) : std::move(down);
        open.push(go_up ? std::move(down) : std::move(up));
      } else {
        open.push(std::move(down));
        open.push(std::move(up));
      }
      report(open, out);
    }

    if (dive) open.push(std::move(*dive));
    out.bound = open.empty() ? (out.has_incumbent ? out.objective : kInfinity)
                             : std::min(open.top().bound, out.has_incumbent ? out.objective : kInfinity);
    if (out.has_incumbent) out.bound = std::min(out.bound, out.objective);
    out.gap = out.has_incumbent ? relative_gap(out.objective, out.bound) : kInfinity;
    if (limit_hit) {
      out.status = limit_status;
    } else if (out.has_incumbent) {
      out.status = MipStatus::Optimal;
    } else {
      out.status = numerical ? MipStatus::NumericalFailure : MipStatus::Infeasible;
    }
    if (out.has_incumbent && out.status == MipStatus::Optimal) out.gap = relative_gap(out.objective, out.bound);
    return out;
  }

 private:
  // Value a node must beat: the incumbent or the caller's cutoff.
  [[nodiscard]] double target(const MipSolution& out) const {
    return std::min(out.has_incumbent ? out.objective : kInfinity, options_.cutoff);
  }

  [[nodiscard]] bool improves(double bound, double incumbent) const {
    if (!std::isfinite(incumbent)) return true;
    return relative_gap(incumbent, bound) > options_.gap_tolerance && bound < incumbent - 1e-9;
  }

  [[nodiscard]] int most_fractional(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = options_.integrality_tolerance;
    for (int j = 0; j < mip_.num_variables(); ++j) {
      if (!mip_.variable(j).integer) continue;
      const double frac = std::abs(x[j] - std::round(x[j]));
      if (frac > best_frac + 1e-12) {
        best_frac = frac;
        best = j;
      }
    }
    return best;
  }

  void try_incumbent(const std::vector<double>& x, MipSolution& out) {
    if (static_cast<int>(x.size()) != mip_.num_variables()) return;
    std::vector<double> candidate = x;
    for (int j = 0; j < mip_.num_variables(); ++j) {
      if (!mip_.variable(j).integer) continue;
      if (std::abs(candidate[j] - std::round(candidate[j])) > options_.integrality_tolerance) return;
      candidate[j] = std::round(candidate[j]);
    }
    if (mip_.max_violation(candidate) > options_.feasibility_tolerance) return;
    const double obj = mip_.objective_value(candidate);
    if (!out.has_incumbent || obj < out.objective - 1e-12) {
      out.has_incumbent = true;
      out.objective = obj;
      out.values = std::move(candidate);
    }
  }

  // Fix rounded integer values and resolve the continuous part.
  void round_heuristic(const std::vector<double>& x, const std::vector<double>& lower, const std::vector<double>& upper,
                       const Basis& basis, MipSolution& out) {
    std::vector<double> lo = lower, hi = upper;
    for (int j = 0; j < mip_.num_variables(); ++j) {
      if (!mip_.variable(j).integer) continue;
      const double r = std::clamp(std::round(x[j]), lo[j], hi[j]);
      lo[j] = hi[j] = r;
    }
    BoundOverride override{lo, hi};
    LpSolution lp = solve_lp(mip_, options_.lp, &basis, &override);
    if (lp.status == LpStatus::Optimal) try_incumbent(lp.values, out);
  }

  template <class Queue>
  void report(const Queue& open, const MipSolution& out) const {
    if (!options_.observer) return;
    MipProgress p;
    p.node = out.nodes;
    p.incumbent = out.has_incumbent ? out.objective : kInfinity;
    p.best_bound = open.empty() ? p.incumbent : std::min(open.top().bound, p.incumbent);
    options_.observer(p);
  }

  const LinearProgram& mip_;
  const MipOptions& options_;
  std::vector<double> root_lower_, root_upper_;
};

}  // namespace

MipSolution branch_and_bound(const LinearProgram& mip, const MipOptions& options) {
  mip.validate();
  BranchAndBound bb(mip, options);
  return bb.run();
}

}  // namespace cargohitch::lp
