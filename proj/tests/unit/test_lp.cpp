#include <gtest/gtest.h>

#include <random>

#include "cargohitch/lp.hpp"
#include "oracles/dense_simplex.hpp"

using namespace cargohitch::lp;

namespace {

LinearProgram random_lp(std::mt19937& rng, int rows, int cols) {
  std::uniform_real_distribution<double> coef(-3.0, 5.0);
  std::uniform_int_distribution<int> sense(0, 2);
  std::bernoulli_distribution present(0.6);
  LinearProgram lp;
  for (int i = 0; i < rows; ++i) {
    const int s = sense(rng);
    Row r;
    r.sense = s == 0 ? RowSense::LessEqual : s == 1 ? RowSense::GreaterEqual : RowSense::Equal;
    r.rhs = std::round(coef(rng) * 2.0);
    lp.add_row(r);
  }
  for (int j = 0; j < cols; ++j) {
    Variable v;
    v.cost = std::round(coef(rng));
    v.upper = std::bernoulli_distribution(0.5)(rng) ? std::round(std::abs(coef(rng))) + 1.0 : 10.0;
    std::vector<Entry> col;
    for (int i = 0; i < rows; ++i)
      if (present(rng)) col.push_back({i, std::round(coef(rng))});
    lp.add_variable(v, col);
  }
  return lp;
}

}  // namespace

TEST(SolveLp, SingleVariableLowerRow) {
  LinearProgram lp;
  lp.add_row({"r", RowSense::GreaterEqual, 3.0});
  std::vector<Entry> col{{0, 1.0}};
  lp.add_variable({"x", 0.0, kInfinity, 1.0}, col);
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.values[0], 3.0, 1e-9);
  EXPECT_NEAR(s.duals[0], 1.0, 1e-9);
}

TEST(SolveLp, SymmetricPacking) {
  LinearProgram lp;
  lp.add_row({"cap", RowSense::LessEqual, 1.0});
  std::vector<Entry> col{{0, 1.0}};
  lp.add_variable({"x", 0.0, kInfinity, -1.0}, col);
  lp.add_variable({"y", 0.0, kInfinity, -1.0}, col);
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective, -1.0, 1e-9);
  EXPECT_NEAR(s.duals[0], -1.0, 1e-9);
  EXPECT_NEAR(s.dual_objective, s.objective, 1e-9);
}

TEST(SolveLp, DetectsInfeasibleAndUnbounded) {
  LinearProgram inf;
  inf.add_row({"a", RowSense::LessEqual, -1.0});
  std::vector<Entry> col{{0, 1.0}};
  inf.add_variable({"x"}, col);
  EXPECT_EQ(solve_lp(inf).status, LpStatus::Infeasible);

  LinearProgram unb;
  unb.add_row({"a", RowSense::GreaterEqual, 1.0});
  unb.add_variable({"x", 0.0, kInfinity, -1.0}, col);
  EXPECT_EQ(solve_lp(unb).status, LpStatus::Unbounded);
}

TEST(SolveLp, FreeVariableAndEquality) {
  LinearProgram lp;
  lp.add_row({"e", RowSense::Equal, 2.0});
  lp.add_row({"g", RowSense::GreaterEqual, -5.0});
  std::vector<Entry> cx{{0, 1.0}, {1, 1.0}};
  std::vector<Entry> cy{{0, 1.0}, {1, -1.0}};
  lp.add_variable({"x", -kInfinity, kInfinity, 1.0}, cx);
  lp.add_variable({"y", 0.0, 4.0, 2.0}, cy);
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective, 2.0, 1e-9);
  EXPECT_LE(lp.max_violation(s.values), 1e-9);
}

TEST(SolveLp, MatchesDenseOracleOnRandomLps) {
  std::mt19937 rng(7);
  int optimal = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const LinearProgram lp = random_lp(rng, 2 + trial % 7, 2 + trial % 9);
    const LpSolution s = solve_lp(lp);
    const auto o = oracle::dense_simplex(lp);
    if (!o.feasible) {
      EXPECT_EQ(s.status, LpStatus::Infeasible) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(s.status, LpStatus::Optimal) << "trial " << trial;
    ++optimal;
    EXPECT_NEAR(s.objective, o.objective, 1e-7) << "trial " << trial;
    EXPECT_NEAR(s.dual_objective, s.objective, 1e-6) << "trial " << trial;
    EXPECT_LE(lp.max_violation(s.values), 1e-7);
    // Dual sign conventions per row sense.
    for (int i = 0; i < lp.num_rows(); ++i) {
      if (lp.row(i).sense == RowSense::LessEqual) {
        EXPECT_LE(s.duals[i], 1e-7);
      }
      if (lp.row(i).sense == RowSense::GreaterEqual) {
        EXPECT_GE(s.duals[i], -1e-7);
      }
    }
  }
  EXPECT_GT(optimal, 50);
}

TEST(SolveLp, WarmStartAfterAddingColumnsAndRows) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    LinearProgram lp = random_lp(rng, 5, 6);
    const LpSolution first = solve_lp(lp);
    // Grow the LP and resolve from the old basis.
    std::vector<Entry> col{{0, 1.0}, {2, -2.0}};
    lp.add_variable({"extra", 0.0, 3.0, -1.0}, col);
    lp.add_row({"new", RowSense::LessEqual, 4.0}, std::vector<Entry>{{0, 1.0}, {6, 1.0}});
    const LpSolution warm = solve_lp(lp, {}, &first.basis);
    const LpSolution cold = solve_lp(lp);
    ASSERT_EQ(warm.status, cold.status);
    if (cold.status == LpStatus::Optimal) {
      EXPECT_NEAR(warm.objective, cold.objective, 1e-7);
    }
  }
}

TEST(SolveLp, Deterministic) {
  std::mt19937 rng(3);
  const LinearProgram lp = random_lp(rng, 6, 8);
  const LpSolution a = solve_lp(lp);
  const LpSolution b = solve_lp(lp);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.duals, b.duals);
}

TEST(BranchAndBound, PureLpMatchesSolveLp) {
  std::mt19937 rng(5);
  const LinearProgram lp = random_lp(rng, 4, 5);
  const LpSolution s = solve_lp(lp);
  const MipSolution m = branch_and_bound(lp);
  if (s.status == LpStatus::Optimal) {
    ASSERT_EQ(m.status, MipStatus::Optimal);
    EXPECT_NEAR(m.objective, s.objective, 1e-9);
    EXPECT_EQ(m.nodes, 1);
  }
}

TEST(BranchAndBound, Knapsack) {
  LinearProgram lp;
  lp.add_row({"w", RowSense::LessEqual, 4.0});
  lp.add_variable({"a", 0.0, 1.0, -5.0, true}, std::vector<Entry>{{0, 3.0}});
  lp.add_variable({"b", 0.0, 1.0, -4.0, true}, std::vector<Entry>{{0, 2.0}});
  const MipSolution m = branch_and_bound(lp);
  ASSERT_EQ(m.status, MipStatus::Optimal);
  EXPECT_NEAR(m.objective, -5.0, 1e-9);
  EXPECT_NEAR(m.values[0], 1.0, 1e-9);
  EXPECT_NEAR(m.values[1], 0.0, 1e-9);
  EXPECT_LE(m.bound, m.objective + 1e-12);
}

TEST(BranchAndBound, InfeasibleRoot) {
  LinearProgram lp;
  lp.add_row({"r", RowSense::Equal, 1.0});
  lp.add_variable({"a", 0.0, 5.0, 1.0, true}, std::vector<Entry>{{0, 2.0}});
  EXPECT_EQ(branch_and_bound(lp).status, MipStatus::Infeasible);
}

TEST(BranchAndBound, MatchesEnumerationAndIsMonotone) {
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> coef(-4, 6);
  for (int trial = 0; trial < 60; ++trial) {
    LinearProgram lp;
    const int rows = 3, cols = 4;
    for (int i = 0; i < rows; ++i) lp.add_row({"", RowSense::LessEqual, static_cast<double>(coef(rng) + 6)});
    for (int j = 0; j < cols; ++j) {
      std::vector<Entry> col;
      for (int i = 0; i < rows; ++i) col.push_back({i, static_cast<double>(coef(rng))});
      lp.add_variable({"", 0.0, 3.0, static_cast<double>(-coef(rng)), true}, col);
    }
    double best = kInfinity;
    std::vector<double> x(cols);
    for (int code = 0; code < 256; ++code) {
      for (int j = 0; j < cols; ++j) x[j] = (code >> (2 * j)) & 3;
      if (lp.max_violation(x) <= 1e-9) best = std::min(best, lp.objective_value(x));
    }
    MipOptions opt;
    double last_bound = -kInfinity, last_inc = kInfinity;
    bool monotone = true;
    opt.observer = [&](const MipProgress& p) {
      if (p.best_bound < last_bound - 1e-9 || p.incumbent > last_inc + 1e-9) monotone = false;
      last_bound = p.best_bound;
      last_inc = p.incumbent;
    };
    const MipSolution m = branch_and_bound(lp, opt);
    ASSERT_EQ(m.status, MipStatus::Optimal);
    EXPECT_NEAR(m.objective, best, 1e-7) << "trial " << trial;
    EXPECT_TRUE(monotone);
  }
}

TEST(BranchAndBound, StartPointBecomesIncumbent) {
  LinearProgram lp;
  lp.add_row({"w", RowSense::LessEqual, 4.0});
  lp.add_variable({"a", 0.0, 1.0, -5.0, true}, std::vector<Entry>{{0, 3.0}});
  lp.add_variable({"b", 0.0, 1.0, -4.0, true}, std::vector<Entry>{{0, 2.0}});
  MipOptions opt;
  opt.start_point = std::vector<double>{0.0, 1.0};
  opt.max_nodes = 0;
  const MipSolution m = branch_and_bound(lp, opt);
  EXPECT_TRUE(m.has_incumbent);
  EXPECT_NEAR(m.objective, -4.0, 1e-12);
  EXPECT_EQ(m.status, MipStatus::NodeLimit);
}

TEST(LinearProgram, ExportAndValidation) {
  LinearProgram lp;
  lp.add_row({"cap", RowSense::LessEqual, 1.0});
  lp.add_variable({"x", 0.0, 2.0, 1.0 / 3.0, true}, std::vector<Entry>{{0, 1.0}});
  const std::string text = lp.to_lp_format();
  EXPECT_NE(text.find("0.333333333333"), std::string::npos);
  EXPECT_NE(text.find("General"), std::string::npos);
  lp.set_bounds(0, 3.0, 1.0);
  EXPECT_THROW(lp.validate(), LpError);
  EXPECT_THROW(lp.add_coefficient(5, 0, 1.0), LpError);
}
