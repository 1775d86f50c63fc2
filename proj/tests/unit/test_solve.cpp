#include <gtest/gtest.h>

#include <cmath>

#include "cargohitch/solve.hpp"
#include "oracles/enumeration.hpp"
#include "support.hpp"

using namespace cargohitch;
using testing_support::exact_config;

TEST(Fig5, AllAlgorithmsFindThirteen) {
  const Instance inst = testing_support::fig5();
  const ExpandedGraph g = build_graph(inst);
  const SolveConfig cfg = exact_config();
  const Solution mip = solve_arc_mip(g, inst, cfg);
  const Solution pnb = price_and_branch(g, inst, cfg);
  const Solution bnp = branch_and_price(g, inst, cfg);
  EXPECT_NEAR(oracle::enumerate_optimum(g, inst).optimum, 13.0, 1e-9);
  for (const Solution* s : {&mip, &pnb, &bnp}) {
    EXPECT_NEAR(s->objective, 13.0, 1e-9) << s->algorithm;
    EXPECT_TRUE(check_solution(*s, g, inst).empty()) << s->algorithm;
    EXPECT_EQ(s->paths.size(), 1u);
  }
  EXPECT_EQ(mip.status, "optimal");
  EXPECT_EQ(bnp.status, "optimal");
  EXPECT_NEAR(bnp.gap, 0.0, 1e-12);
  // Price-and-branch finds the optimum but only has the root bound.
  EXPECT_LE(pnb.lower_bound, 13.0 + 1e-9);
}

TEST(TinySuite, MatchesEnumeration) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Instance inst = testing_support::tiny(seed);
    const ExpandedGraph g = build_graph(inst);
    const double opt = oracle::enumerate_optimum(g, inst).optimum;
    ASSERT_TRUE(std::isfinite(opt)) << "seed " << seed;
    const SolveConfig cfg = exact_config();
    for (const Solution& s : {solve_arc_mip(g, inst, cfg), branch_and_price(g, inst, cfg)}) {
      EXPECT_NEAR(s.objective, opt, 1e-6 * std::max(1.0, opt)) << s.algorithm << " seed " << seed;
      EXPECT_TRUE(check_solution(s, g, inst).empty()) << s.algorithm << " seed " << seed;
    }
    const Solution pnb = price_and_branch(g, inst, cfg);
    EXPECT_GE(pnb.objective, opt - 1e-6 * std::max(1.0, opt));
    EXPECT_TRUE(check_solution(pnb, g, inst).empty());
  }
}

TEST(ColumnGeneration, RootEqualsArcRelaxation) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Instance inst = testing_support::tiny(seed);
    const ExpandedGraph g = build_graph(inst);
    const lp::LpSolution relax = lp::solve_lp(build_arc_mip(g, inst).lp);
    MasterState m(g, inst);
    Pricer pricer(g, inst);
    PricingState state(inst, 1.0);
    const CgResult cg = column_generation(m, pricer, state, exact_config(), Deadline(60.0));
    ASSERT_TRUE(cg.converged);
    EXPECT_NEAR(cg.value, relax.objective, 1e-5) << "seed " << seed;
    EXPECT_LE(cg.lower_bound, cg.value + 1e-9);
  }
}

TEST(Gap, RejectsInvertedBounds) {
  EXPECT_DOUBLE_EQ(integrality_gap(10.0, 8.0), 0.2);
  EXPECT_DOUBLE_EQ(integrality_gap(10.0, 10.0), 0.0);
  EXPECT_THROW((void)integrality_gap(10.0, 11.0), std::logic_error);
}

TEST(Branching, MostFractionalLowestIndex) {
  EXPECT_EQ(select_branching_variable(std::vector<double>{1.0, 0.3, 0.5, 1.5}), 2);
  EXPECT_EQ(select_branching_variable(std::vector<double>{0.5, 0.5}), 0);
  EXPECT_THROW((void)select_branching_variable(std::vector<double>{1.0, 2.0 + 1e-8}), std::logic_error);
}

TEST(Config, Validation) {
  SolveConfig c;
  c.phi = 0.0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = SolveConfig{};
  c.time_limit = -1.0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = SolveConfig{};
  c.epsilon = -0.1;
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Checker, FlagsBrokenSolutions) {
  const Instance inst = testing_support::fig5();
  const ExpandedGraph g = build_graph(inst);
  const Solution good = branch_and_price(g, inst, exact_config());
  ASSERT_TRUE(check_solution(good, g, inst).empty());

  Solution s = good;
  s.y[1] = 0;  // x exceeds y
  EXPECT_FALSE(check_solution(s, g, inst).empty());

  s = good;
  s.x.clear();  // freight without capacity
  EXPECT_FALSE(check_solution(s, g, inst).empty());

  s = good;
  s.objective -= 1.0;
  EXPECT_FALSE(check_solution(s, g, inst).empty());

  s = good;
  s.paths.begin()->second.pop_back();  // path stops short
  EXPECT_FALSE(check_solution(s, g, inst).empty());

  s = good;
  s.g[0].assign(s.g[0].size(), 0.0);  // passengers not served
  EXPECT_FALSE(check_solution(s, g, inst).empty());

  s = good;
  s.rejected.push_back(s.paths.begin()->first);  // both accepted and rejected
  EXPECT_FALSE(check_solution(s, g, inst).empty());
}

TEST(SolutionJson, RoundTripsThroughParse) {
  const Instance inst = testing_support::tiny(4);
  const ExpandedGraph g = build_graph(inst);
  const Solution s = branch_and_price(g, inst, exact_config());
  const std::string text = solution_json(s, g, inst);
  const Solution back = parse_solution(text, g, inst);
  EXPECT_EQ(back.y, s.y);
  EXPECT_EQ(back.x, s.x);
  EXPECT_EQ(back.paths, s.paths);
  EXPECT_EQ(back.rejected, s.rejected);
  EXPECT_TRUE(check_solution(back, g, inst).empty());
  EXPECT_EQ(solution_json(back, g, inst).substr(0, 40), text.substr(0, 40));
  EXPECT_THROW((void)parse_solution("{\"y\": {\"nope\": 1}}", g, inst), ValidationError);
}

TEST(SolutionJson, DeterministicWithoutTiming) {
  const Instance inst = generate_instance(preset("small"), 2);
  const ExpandedGraph g = build_graph(inst);
  SolveConfig cfg = exact_config();
  cfg.epsilon = 1e-3;
  const Solution a = branch_and_price(g, inst, cfg);
  const Solution b = branch_and_price(g, inst, cfg);
  EXPECT_EQ(solution_json(a, g, inst), solution_json(b, g, inst));
  EXPECT_EQ(log_csv(a), log_csv(b));
  EXPECT_EQ(log_csv(a).substr(0, 25), "iteration,ub,lb,cols,time");
}

TEST(TimeLimit, ReturnsFeasiblePartialSolution) {
  const Instance inst = generate_instance(preset("medium"), 1);
  const ExpandedGraph g = build_graph(inst);
  SolveConfig cfg;
  cfg.time_limit = 2.0;
  cfg.branch_reserve = 0.5;
  for (const Solution& s : {price_and_branch(g, inst, cfg), branch_and_price(g, inst, cfg)}) {
    EXPECT_TRUE(s.status == "time_limit" || s.status == "optimal") << s.algorithm << " " << s.status;
    EXPECT_TRUE(std::isfinite(s.objective));
    EXPECT_TRUE(check_solution(s, g, inst).empty()) << s.algorithm;
    EXPECT_LT(s.wall_time, 30.0);
  }
}

TEST(Bounds, SandwichAtEveryIteration) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Instance inst = testing_support::tiny(seed);
    const ExpandedGraph g = build_graph(inst);
    const double opt = oracle::enumerate_optimum(g, inst).optimum;
    const double tol = 1e-6 * std::max(1.0, std::abs(opt));
    SolveConfig cfg = exact_config();
    int checks = 0;
    // Root column generation: every full-round bound is global.
    cfg.on_cg_iteration = [&](const CgProgress& p) {
      if (!p.full) return;
      ++checks;
      EXPECT_LE(p.lower_bound, opt + tol) << "seed " << seed;
    };
    for (double phi : {1.0, 0.1}) {
      MasterState m(g, inst);
      Pricer pricer(g, inst);
      PricingState state(inst, phi);
      (void)column_generation(m, pricer, state, cfg, Deadline(60.0));
    }
    // Inside the tree a node's bound only covers its subtree; the global
    // bounds are the ones reported per iteration.
    cfg.on_cg_iteration = nullptr;
    cfg.on_bnp_iteration = [&](const BnpProgress& p) {
      ++checks;
      EXPECT_LE(p.lower_bound, opt + tol) << "seed " << seed;
      EXPECT_GE(p.upper_bound, opt - tol) << "seed " << seed;
    };
    (void)branch_and_price(g, inst, cfg);
    EXPECT_GT(checks, 0);
  }
}
