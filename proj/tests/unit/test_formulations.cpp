#include <gtest/gtest.h>

#include "cargohitch/formulations.hpp"
#include "oracles/dense_simplex.hpp"
#include "support.hpp"

using namespace cargohitch;

TEST(ArcMip, Fig5Optimum) {
  const Instance inst = testing_support::fig5();
  const ExpandedGraph g = build_graph(inst);
  const ArcMip mip = build_arc_mip(g, inst);
  lp::MipOptions opts;
  opts.gap_tolerance = 1e-9;
  const lp::MipSolution res = lp::branch_and_bound(mip.lp, opts);
  ASSERT_EQ(res.status, lp::MipStatus::Optimal);
  EXPECT_NEAR(res.objective, 13.0, 1e-9);
  EXPECT_NEAR(res.values[mip.y[1]], 1.0, 1e-9);
  EXPECT_NEAR(res.values[mip.y[0]], 0.0, 1e-9);
}

TEST(ArcMip, RelaxationMatchesDenseOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance inst = testing_support::tiny(seed);
    const ExpandedGraph g = build_graph(inst);
    const ArcMip mip = build_arc_mip(g, inst);
    const lp::LpSolution sol = lp::solve_lp(mip.lp);
    const oracle::DenseResult ref = oracle::dense_simplex(mip.lp);
    ASSERT_EQ(sol.status, lp::LpStatus::Optimal);
    ASSERT_TRUE(ref.feasible);
    EXPECT_NEAR(sol.objective, ref.objective, 1e-6 * std::max(1.0, std::abs(ref.objective))) << "seed " << seed;
  }
}

TEST(Master, StartsWithDummyColumns) {
  const Instance inst = testing_support::fig5();
  const ExpandedGraph g = build_graph(inst);
  MasterState m(g, inst);
  ASSERT_EQ(m.columns().size(), 1u);
  EXPECT_EQ(m.columns()[0].arcs, std::vector<int>{g.dummy[1]});
  EXPECT_TRUE(m.columns_of(0).empty());
  const lp::LpSolution sol = lp::solve_lp(m.lp());
  ASSERT_EQ(sol.status, lp::LpStatus::Optimal);
  EXPECT_NEAR(sol.objective, 100.0, 1e-9);  // everything rejected
  EXPECT_EQ(m.add_columns(std::vector<Column>{m.columns()[0]}), 0);
  EXPECT_EQ(m.duplicates_skipped(), 1);
}

TEST(Master, ColumnCostIsSumOfArcCosts) {
  const Instance inst = testing_support::fig5();
  const ExpandedGraph g = build_graph(inst);
  std::vector<int> arcs{g.dummy[1]};
  const Column c = make_column(g, 1, arcs);
  EXPECT_DOUBLE_EQ(c.cost, g.arcs[g.dummy[1]].cost);
  EXPECT_EQ(c.key(), arcs);
}

TEST(Master, DualSigns) {
  const Instance inst = testing_support::tiny(3);
  const ExpandedGraph g = build_graph(inst);
  MasterState m(g, inst);
  const lp::LpSolution sol = lp::solve_lp(m.lp());
  ASSERT_EQ(sol.status, lp::LpStatus::Optimal);
  const DualValues d = m.extract_duals(sol);
  EXPECT_GE(d.gamma, 0.0);
  for (int a : g.arcs_of(ArcClass::Segment)) {
    EXPECT_LE(d.alpha[a], 0.0);
    EXPECT_LE(d.pi[a], 0.0);
  }
  for (double t : d.tau) EXPECT_LE(t, 0.0);
}

TEST(Master, IntegerizeMarksDesignAndColumns) {
  const Instance inst = testing_support::fig5();
  const ExpandedGraph g = build_graph(inst);
  const MasterState m(g, inst);
  const lp::LinearProgram ip = m.integerize();
  EXPECT_TRUE(ip.variable(m.y_var(0)).integer);
  EXPECT_TRUE(ip.variable(m.column_var(0)).integer);
  EXPECT_FALSE(ip.variable(m.g_var(0, 0)).integer);
}
