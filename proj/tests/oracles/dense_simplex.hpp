#pragma once

// Textbook two-phase tableau simplex with Bland's rule. Slow, dense and
// deliberately independent of the solver under test.

#include <cmath>
#include <vector>

#include "cargohitch/lp.hpp"

namespace oracle {

struct DenseResult {
  bool feasible = false;
  bool bounded = true;
  double objective = 0.0;
  std::vector<double> x;
};

inline DenseResult dense_simplex(const cargohitch::lp::LinearProgram& lp, std::vector<double> lower = {},
                                 std::vector<double> upper = {}) {
  using cargohitch::lp::RowSense;
  const int n = lp.num_variables();
  if (lower.empty()) {
    lower.resize(n);
    upper.resize(n);
    for (int j = 0; j < n; ++j) {
      lower[j] = lp.variable(j).lower;
      upper[j] = lp.variable(j).upper;
    }
  }
  DenseResult res;
  for (int j = 0; j < n; ++j)
    if (lower[j] > upper[j] + 1e-12) return res;

  // Columns: for finite lower l: x = l + p; for -inf lower: x = p - m (split).
  struct Split {
    int pos;
    int neg;  // -1 when not split
  };
  std::vector<Split> split(n);
  int cols = 0;
  for (int j = 0; j < n; ++j) {
    split[j].pos = cols++;
    split[j].neg = std::isfinite(lower[j]) ? -1 : cols++;
  }
  struct DRow {
    std::vector<double> a;
    RowSense sense;
    double rhs;
  };
  std::vector<DRow> rows;
  for (int i = 0; i < lp.num_rows(); ++i) rows.push_back({std::vector<double>(cols, 0.0), lp.row(i).sense, lp.row(i).rhs});
  for (int j = 0; j < n; ++j) {
    const double shift = std::isfinite(lower[j]) ? lower[j] : 0.0;
    for (const auto& e : lp.column(j)) {
      rows[e.index].a[split[j].pos] += e.value;
      if (split[j].neg >= 0) rows[e.index].a[split[j].neg] -= e.value;
      rows[e.index].rhs -= e.value * shift;
    }
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(upper[j])) continue;
    DRow r{std::vector<double>(cols, 0.0), RowSense::LessEqual, 0.0};
    r.a[split[j].pos] = 1.0;
    if (split[j].neg >= 0) {
      r.a[split[j].neg] = -1.0;
      r.rhs = upper[j];
    } else {
      r.rhs = upper[j] - lower[j];
    }
    rows.push_back(std::move(r));
  }
  for (auto& r : rows) {
    if (r.rhs < 0) {
      for (double& v : r.a) v = -v;
      r.rhs = -r.rhs;
      if (r.sense == RowSense::LessEqual) r.sense = RowSense::GreaterEqual;
      else if (r.sense == RowSense::GreaterEqual) r.sense = RowSense::LessEqual;
    }
  }
  const int m = static_cast<int>(rows.size());
  int n_slack = 0, n_art = 0;
  for (const auto& r : rows) {
    if (r.sense != RowSense::Equal) ++n_slack;
    if (r.sense != RowSense::LessEqual) ++n_art;
  }
  const int width = cols + n_slack + n_art;
  std::vector<std::vector<double>> t(m, std::vector<double>(width + 1, 0.0));
  std::vector<int> basis(m);
  int s = cols, a = cols + n_slack;
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < cols; ++k) t[i][k] = rows[i].a[k];
    t[i][width] = rows[i].rhs;
    if (rows[i].sense == RowSense::LessEqual) {
      t[i][s] = 1.0;
      basis[i] = s++;
    } else if (rows[i].sense == RowSense::GreaterEqual) {
      t[i][s++] = -1.0;
      t[i][a] = 1.0;
      basis[i] = a++;
    } else {
      t[i][a] = 1.0;
      basis[i] = a++;
    }
  }
  const int art_begin = cols + n_slack;

  auto pivot = [&](int r, int c) {
    const double p = t[r][c];
    for (double& v : t[r]) v /= p;
    for (int i = 0; i < m; ++i) {
      if (i == r || t[i][c] == 0.0) continue;
      const double f = t[i][c];
      for (int k = 0; k <= width; ++k) t[i][k] -= f * t[r][k];
    }
    basis[r] = c;
  };

  // Runs Bland simplex for the given column costs; returns false if unbounded.
  auto optimise = [&](const std::vector<double>& cost, int allowed) {
    for (int iter = 0; iter < 100000; ++iter) {
      int enter = -1;
      for (int k = 0; k < allowed; ++k) {
        double d = cost[k];
        for (int i = 0; i < m; ++i) d -= cost[basis[i]] * t[i][k];
        if (d < -1e-10) {
          enter = k;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        if (t[i][enter] <= 1e-10) continue;
        const double ratio = t[i][width] / t[i][enter];
        if (leave < 0 || ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  };

  std::vector<double> phase1(width, 0.0);
  for (int k = art_begin; k < width; ++k) phase1[k] = 1.0;
  optimise(phase1, width);
  double infeas = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= art_begin) infeas += t[i][width];
  if (infeas > 1e-7) return res;
  res.feasible = true;
  // Drive remaining zero-valued artificials out of the basis when possible.
  for (int i = 0; i < m; ++i) {
    if (basis[i] < art_begin) continue;
    for (int k = 0; k < art_begin; ++k) {
      if (std::abs(t[i][k]) > 1e-9) {
        pivot(i, k);
        break;
      }
    }
  }
  std::vector<double> phase2(width, 0.0);
  for (int j = 0; j < n; ++j) {
    phase2[split[j].pos] = lp.variable(j).cost;
    if (split[j].neg >= 0) phase2[split[j].neg] = -lp.variable(j).cost;
  }
  if (!optimise(phase2, art_begin)) {
    res.bounded = false;
    return res;
  }
  std::vector<double> value(width, 0.0);
  for (int i = 0; i < m; ++i) value[basis[i]] = t[i][width];
  res.x.resize(n);
  res.objective = 0.0;
  for (int j = 0; j < n; ++j) {
    double v = value[split[j].pos];
    if (split[j].neg >= 0) v -= value[split[j].neg];
    else v += lower[j];
    res.x[j] = v;
    res.objective += lp.variable(j).cost * v;
  }
  return res;
}

}  // namespace oracle
