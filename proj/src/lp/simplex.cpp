// Bounded revised primal simplex with an explicit dense basis inverse.
//
// Every row i gets a slack s_i so that A x + s = b, with slack bounds
// [0, inf) for <=, (-inf, 0] for >= and [0, 0] for = rows. Phase 1 minimises
// the sum of bound violations of the basic variables (composite method), so
// any starting basis can be used; this is what makes warm starts after
// column additions and bound changes work without artificials.

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cargohitch/lp.hpp"

namespace cargohitch::lp {
namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kSingularTolerance = 1e-11;
constexpr int kDegenerateStreakForBland = 40;

class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const LpOptions& options, const BoundOverride* bounds)
      : lp_(lp), options_(options), m_(lp.num_rows()), n_(lp.num_variables()), total_(n_ + m_) {
    cost_.assign(total_, 0.0);
    lower_.resize(total_);
    upper_.resize(total_);
    for (int j = 0; j < n_; ++j) {
      const Variable& v = lp.variable(j);
      cost_[j] = v.cost;
      lower_[j] = bounds ? bounds->lower[j] : v.lower;
      upper_[j] = bounds ? bounds->upper[j] : v.upper;
    }
    rhs_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const Row& r = lp.row(i);
      rhs_[i] = r.rhs;
      const int s = n_ + i;
      switch (r.sense) {
        case RowSense::LessEqual: lower_[s] = 0.0; upper_[s] = kInfinity; break;
        case RowSense::GreaterEqual: lower_[s] = -kInfinity; upper_[s] = 0.0; break;
        case RowSense::Equal: lower_[s] = 0.0; upper_[s] = 0.0; break;
      }
    }
    x_.assign(total_, 0.0);
    status_.assign(total_, VarStatus::AtLower);
    where_.assign(total_, -1);
    head_.assign(m_, -1);
  }

  LpSolution run(const Basis* warm) {
    LpSolution out;
    for (int j = 0; j < n_; ++j) {
      if (lower_[j] > upper_[j]) {
        out.status = LpStatus::Infeasible;
        return out;
      }
    }
    load_basis(warm);
    if (!factor()) {
      out.status = LpStatus::NumericalFailure;
      return out;
    }
    compute_primal();
    out.status = iterate(out.iterations);
    if (out.status == LpStatus::Optimal || out.status == LpStatus::IterationLimit || out.status == LpStatus::TimeLimit) {
      fill_solution(out);
    }
    return out;
  }

 private:
  template <class F>
  void for_column(int j, F&& f) const {
    if (j < n_) {
      for (const Entry& e : lp_.column(j)) f(e.index, e.value);
    } else {
      f(j - n_, 1.0);
    }
  }

  [[nodiscard]] VarStatus default_nonbasic(int j) const {
    if (std::isfinite(lower_[j])) return VarStatus::AtLower;
    if (std::isfinite(upper_[j])) return VarStatus::AtUpper;
    return VarStatus::Free;
  }

  [[nodiscard]] double nonbasic_value(int j) const {
    switch (status_[j]) {
      case VarStatus::AtLower: return lower_[j];
      case VarStatus::AtUpper: return upper_[j];
      default: return 0.0;
    }
  }

  void load_basis(const Basis* warm) {
    candidates_.clear();
    for (int j = 0; j < total_; ++j) {
      VarStatus s;
      if (j < n_) {
        s = (warm && j < static_cast<int>(warm->columns.size())) ? warm->columns[j] : default_nonbasic(j);
      } else {
        const int i = j - n_;
        s = (warm && i < static_cast<int>(warm->rows.size())) ? warm->rows[i] : VarStatus::Basic;
      }
      if (s == VarStatus::AtLower && !std::isfinite(lower_[j])) s = default_nonbasic(j);
      if (s == VarStatus::AtUpper && !std::isfinite(upper_[j])) s = default_nonbasic(j);
      if (s == VarStatus::Free && (std::isfinite(lower_[j]) || std::isfinite(upper_[j]))) s = default_nonbasic(j);
      status_[j] = s;
      if (s == VarStatus::Basic) candidates_.push_back(j);
    }
    select_basis_from_candidates();
  }

  // Picks a nonsingular basis out of candidates_ by Gaussian elimination with
  // row pivoting; rejected candidates become nonbasic and unpivoted rows get
  // their slack.
  void select_basis_from_candidates() {
    std::fill(head_.begin(), head_.end(), -1);
    std::fill(where_.begin(), where_.end(), -1);
    const int c = static_cast<int>(candidates_.size());
    std::vector<double> dense(static_cast<size_t>(m_) * std::max(c, 1), 0.0);
    auto at = [&](int row, int col) -> double& { return dense[static_cast<size_t>(row) * c + col]; };
    for (int k = 0; k < c; ++k) for_column(candidates_[k], [&](int row, double v) { at(row, k) += v; });
    std::vector<char> row_used(m_, 0);
    for (int k = 0; k < c; ++k) {
      const int var = candidates_[k];
      int best = -1;
      double best_abs = kPivotTolerance;
      for (int r = 0; r < m_; ++r) {
        if (row_used[r]) continue;
        if (std::abs(at(r, k)) > best_abs) {
          best_abs = std::abs(at(r, k));
          best = r;
        }
      }
      if (best < 0) {
        status_[var] = default_nonbasic(var);
        continue;
      }
      row_used[best] = 1;
      head_[best] = var;
      where_[var] = best;
      const double piv = at(best, k);
      for (int r = 0; r < m_; ++r) {
        if (row_used[r] || at(r, k) == 0.0) continue;
        const double f = at(r, k) / piv;
        for (int kk = k; kk < c; ++kk) at(r, kk) -= f * at(best, kk);
      }
    }
    for (int r = 0; r < m_; ++r) {
      if (head_[r] >= 0) continue;
      const int slack = n_ + r;
      if (where_[slack] >= 0) {
        // slack already basic elsewhere; find a free row for the rest later
        continue;
      }
      head_[r] = slack;
      where_[slack] = r;
      status_[slack] = VarStatus::Basic;
    }
    // A slack may have been pivoted on another row, leaving holes; fill any
    // remaining position with a non-basic slack.
    for (int r = 0; r < m_; ++r) {
      if (head_[r] >= 0) continue;
      for (int i = 0; i < m_; ++i) {
        const int slack = n_ + i;
        if (where_[slack] < 0) {
          head_[r] = slack;
          where_[slack] = r;
          status_[slack] = VarStatus::Basic;
          break;
        }
      }
    }
  }

  // Explicit inverse by Gauss-Jordan with partial pivoting. On singularity
  // the basis is repaired once via select_basis_from_candidates().
  bool factor() {
    for (int attempt = 0; attempt < 2; ++attempt) {
      if (invert()) return true;
      candidates_.clear();
      for (int r = 0; r < m_; ++r) candidates_.push_back(head_[r]);
      std::sort(candidates_.begin(), candidates_.end());
      for (int j = 0; j < total_; ++j)
        if (status_[j] == VarStatus::Basic && where_[j] < 0) status_[j] = default_nonbasic(j);
      select_basis_from_candidates();
    }
    return invert();
  }

  bool invert() {
    const size_t mm = static_cast<size_t>(m_) * m_;
    std::vector<double> b(mm, 0.0);
    for (int k = 0; k < m_; ++k) for_column(head_[k], [&](int row, double v) { b[static_cast<size_t>(row) * m_ + k] += v; });
    binv_.assign(mm, 0.0);
    for (int i = 0; i < m_; ++i) binv_[static_cast<size_t>(i) * m_ + i] = 1.0;
    for (int col = 0; col < m_; ++col) {
      int piv = -1;
      double best = kSingularTolerance;
      for (int r = col; r < m_; ++r) {
        const double v = std::abs(b[static_cast<size_t>(r) * m_ + col]);
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (piv < 0) return false;
      if (piv != col) {
        std::swap_ranges(b.begin() + static_cast<long>(piv) * m_, b.begin() + static_cast<long>(piv + 1) * m_,
                         b.begin() + static_cast<long>(col) * m_);
        std::swap_ranges(binv_.begin() + static_cast<long>(piv) * m_, binv_.begin() + static_cast<long>(piv + 1) * m_,
                         binv_.begin() + static_cast<long>(col) * m_);
      }
      double* brow = &b[static_cast<size_t>(col) * m_];
      double* irow = &binv_[static_cast<size_t>(col) * m_];
      const double inv = 1.0 / brow[col];
      for (int k = 0; k < m_; ++k) {
        brow[k] *= inv;
        irow[k] *= inv;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == col) continue;
        double* br = &b[static_cast<size_t>(r) * m_];
        const double f = br[col];
        if (f == 0.0) continue;
        double* ir = &binv_[static_cast<size_t>(r) * m_];
        for (int k = 0; k < m_; ++k) {
          br[k] -= f * brow[k];
          ir[k] -= f * irow[k];
        }
      }
    }
    // b was reduced to the identity with rows in basis-position order, so
    // binv_ row k now corresponds to basis position k.
    return true;
  }

  void compute_primal() {
    std::vector<double> r = rhs_;
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::Basic) continue;
      x_[j] = nonbasic_value(j);
      if (x_[j] == 0.0) continue;
      const double v = x_[j];
      for_column(j, [&](int row, double a) { r[row] -= a * v; });
    }
    for (int k = 0; k < m_; ++k) {
      const double* row = &binv_[static_cast<size_t>(k) * m_];
      double s = 0.0;
      for (int i = 0; i < m_; ++i) s += row[i] * r[i];
      x_[head_[k]] = s;
    }
  }

  [[nodiscard]] double infeasibility(int j) const {
    const double tol = options_.primal_tolerance;
    if (x_[j] < lower_[j] - tol) return lower_[j] - x_[j];
    if (x_[j] > upper_[j] + tol) return x_[j] - upper_[j];
    return 0.0;
  }

  void compute_duals(bool phase1, std::vector<double>& y) const {
    y.assign(m_, 0.0);
    const double tol = options_.primal_tolerance;
    for (int k = 0; k < m_; ++k) {
      const int j = head_[k];
      double c;
      if (phase1) {
        c = x_[j] < lower_[j] - tol ? -1.0 : (x_[j] > upper_[j] + tol ? 1.0 : 0.0);
      } else {
        c = cost_[j];
      }
      if (c == 0.0) continue;
      const double* row = &binv_[static_cast<size_t>(k) * m_];
      for (int i = 0; i < m_; ++i) y[i] += c * row[i];
    }
  }

  [[nodiscard]] double reduced_cost(int j, bool phase1, const std::vector<double>& y) const {
    double d = phase1 ? 0.0 : cost_[j];
    for_column(j, [&](int row, double a) { d -= y[row] * a; });
    return d;
  }

  LpStatus iterate(int& iterations) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    std::vector<double> y;
    std::vector<double> alpha(m_);
    int since_refactor = 0;
    int degenerate_streak = 0;
    bool verified = false;

    for (iterations = 0;; ++iterations) {
      if (iterations >= options_.max_iterations) return LpStatus::IterationLimit;
      if ((iterations & 31) == 0 && std::isfinite(options_.time_limit)) {
        const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
        if (elapsed > options_.time_limit) return LpStatus::TimeLimit;
      }
      if (since_refactor >= options_.refactor_interval) {
        if (!factor()) return LpStatus::NumericalFailure;
        compute_primal();
        since_refactor = 0;
      }

      bool phase1 = false;
      for (int k = 0; k < m_ && !phase1; ++k) phase1 = infeasibility(head_[k]) > 0.0;
      compute_duals(phase1, y);

      const bool bland = degenerate_streak > kDegenerateStreakForBland;
      int entering = -1;
      int direction = 0;
      double best_score = 0.0;
      for (int j = 0; j < total_; ++j) {
        const VarStatus s = status_[j];
        if (s == VarStatus::Basic) continue;
        if (lower_[j] == upper_[j]) continue;
        const double d = reduced_cost(j, phase1, y);
        int dir = 0;
        if (s == VarStatus::AtLower && d < -options_.dual_tolerance) dir = 1;
        else if (s == VarStatus::AtUpper && d > options_.dual_tolerance) dir = -1;
        else if (s == VarStatus::Free && std::abs(d) > options_.dual_tolerance) dir = d < 0 ? 1 : -1;
        if (dir == 0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(d) > best_score) {
          best_score = std::abs(d);
          entering = j;
          direction = dir;
        }
      }

      if (entering < 0) {
        if (phase1) return LpStatus::Infeasible;
        if (!verified) {
          // Confirm optimality on a fresh factorisation before reporting.
          if (!factor()) return LpStatus::NumericalFailure;
          compute_primal();
          since_refactor = 0;
          verified = true;
          continue;
        }
        return LpStatus::Optimal;
      }
      verified = false;

      // alpha = B^-1 a_q
      std::fill(alpha.begin(), alpha.end(), 0.0);
      for_column(entering, [&](int row, double a) {
        for (int k = 0; k < m_; ++k) alpha[k] += binv_[static_cast<size_t>(k) * m_ + row] * a;
      });

      const double ptol = options_.primal_tolerance;
      // Pass 1 (Harris): largest step with bounds relaxed by the tolerance.
      double relaxed_step = upper_[entering] - lower_[entering];
      if (!std::isfinite(relaxed_step)) relaxed_step = kInfinity;
      for (int k = 0; k < m_; ++k) {
        if (std::abs(alpha[k]) <= kPivotTolerance) continue;
        const int j = head_[k];
        const double delta = -direction * alpha[k];
        const double v = x_[j];
        double limit = kInfinity;
        if (delta < 0) {
          if (v > upper_[j] + ptol) limit = (v - upper_[j] + ptol) / -delta;
          else if (v >= lower_[j] - ptol && std::isfinite(lower_[j])) limit = (v - lower_[j] + ptol) / -delta;
        } else {
          if (v < lower_[j] - ptol) limit = (lower_[j] - v + ptol) / delta;
          else if (v <= upper_[j] + ptol && std::isfinite(upper_[j])) limit = (upper_[j] - v + ptol) / delta;
        }
        relaxed_step = std::min(relaxed_step, limit);
      }
      if (!std::isfinite(relaxed_step)) {
        return phase1 ? LpStatus::NumericalFailure : LpStatus::Unbounded;
      }

      // Pass 2: among rows whose exact ratio fits, take the largest pivot.
      int leave_pos = -1;
      double leave_bound = 0.0;
      double step = 0.0;
      double best_pivot = 0.0;
      for (int k = 0; k < m_; ++k) {
        if (std::abs(alpha[k]) <= kPivotTolerance) continue;
        const int j = head_[k];
        const double delta = -direction * alpha[k];
        const double v = x_[j];
        double ratio = kInfinity;
        double bound = 0.0;
        if (delta < 0) {
          if (v > upper_[j] + ptol) {
            ratio = (v - upper_[j]) / -delta;
            bound = upper_[j];
          } else if (v >= lower_[j] - ptol && std::isfinite(lower_[j])) {
            ratio = (v - lower_[j]) / -delta;
            bound = lower_[j];
          }
        } else {
          if (v < lower_[j] - ptol) {
            ratio = (lower_[j] - v) / delta;
            bound = lower_[j];
          } else if (v <= upper_[j] + ptol && std::isfinite(upper_[j])) {
            ratio = (upper_[j] - v) / delta;
            bound = upper_[j];
          }
        }
        if (ratio > relaxed_step) continue;
        const bool better = bland ? (leave_pos < 0 || j < head_[leave_pos]) : std::abs(alpha[k]) > best_pivot;
        if (better) {
          best_pivot = std::abs(alpha[k]);
          leave_pos = k;
          leave_bound = bound;
          step = std::max(ratio, 0.0);
        }
      }

      const double own_range = upper_[entering] - lower_[entering];
      const bool bound_flip = std::isfinite(own_range) && (leave_pos < 0 || own_range <= step);
      if (bound_flip) step = own_range;
      if (!bound_flip && leave_pos < 0) return LpStatus::NumericalFailure;

      degenerate_streak = step < 1e-12 ? degenerate_streak + 1 : 0;

      // Primal update.
      if (status_[entering] == VarStatus::Free) x_[entering] = 0.0;
      x_[entering] += direction * step;
      for (int k = 0; k < m_; ++k) x_[head_[k]] -= direction * step * alpha[k];

      if (bound_flip) {
        status_[entering] = direction > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
        x_[entering] = direction > 0 ? upper_[entering] : lower_[entering];
        continue;
      }

      const int leaving = head_[leave_pos];
      x_[leaving] = leave_bound;
      status_[leaving] = (leave_bound == lower_[leaving]) ? VarStatus::AtLower : VarStatus::AtUpper;
      where_[leaving] = -1;
      head_[leave_pos] = entering;
      where_[entering] = leave_pos;
      status_[entering] = VarStatus::Basic;

      // Rank-one update of the explicit inverse.
      const double piv = alpha[leave_pos];
      double* prow = &binv_[static_cast<size_t>(leave_pos) * m_];
      for (int i = 0; i < m_; ++i) prow[i] /= piv;
      for (int k = 0; k < m_; ++k) {
        if (k == leave_pos || alpha[k] == 0.0) continue;
        double* row = &binv_[static_cast<size_t>(k) * m_];
        const double f = alpha[k];
        for (int i = 0; i < m_; ++i) row[i] -= f * prow[i];
      }
      ++since_refactor;
    }
  }

  void fill_solution(LpSolution& out) {
    std::vector<double> y;
    compute_duals(false, y);
    out.values.assign(x_.begin(), x_.begin() + n_);
    out.duals = y;
    out.reduced_costs.resize(n_);
    out.objective = 0.0;
    for (int j = 0; j < n_; ++j) {
      out.reduced_costs[j] = reduced_cost(j, false, y);
      out.objective += cost_[j] * x_[j];
    }
    double dual_obj = 0.0;
    for (int i = 0; i < m_; ++i) dual_obj += rhs_[i] * y[i];
    for (int j = 0; j < n_; ++j)
      if (status_[j] != VarStatus::Basic && x_[j] != 0.0) dual_obj += out.reduced_costs[j] * x_[j];
    out.dual_objective = dual_obj;
    out.basis.columns.assign(status_.begin(), status_.begin() + n_);
    out.basis.rows.assign(status_.begin() + n_, status_.end());
  }

  const LinearProgram& lp_;
  LpOptions options_;
  int m_;
  int n_;
  int total_;
  std::vector<double> cost_, lower_, upper_, rhs_, x_;
  std::vector<VarStatus> status_;
  std::vector<int> head_;
  std::vector<int> where_;
  std::vector<int> candidates_;
  std::vector<double> binv_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options, const Basis* warm_start,
                    const BoundOverride* bounds) {
  RevisedSimplex simplex(lp, options, bounds);
  return simplex.run(warm_start);
}

}  // namespace cargohitch::lp
