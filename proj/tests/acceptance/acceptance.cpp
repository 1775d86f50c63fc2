// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "cargohitch/report.hpp"
#include "oracles/enumeration.hpp"
#include "oracles/shortest_path.hpp"
#include "support.hpp"

using namespace cargohitch;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kTinySeeds = 120;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
  fmt::print("criterion {:>2} {}: {} - {}\n", id, o.pass ? "PASS" : "FAIL", name, o.detail);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

// Shared audit of every solution produced below.
struct Audit {
  int solutions = 0;
  int violations = 0;
  std::string first;
  void check(const Solution& s, const ExpandedGraph& g, const Instance& inst, const std::string& where) {
    ++solutions;
    const auto issues = check_solution(s, g, inst);
    violations += static_cast<int>(issues.size());
    if (!issues.empty() && first.empty()) first = where + ": " + issues.front();
  }
};

Outcome fig5_graph() {
  const auto t0 = Clock::now();
  const Instance inst = testing_support::fig5();
  const ExpandedGraph g = build_graph(inst);
  using T = std::tuple<std::string, int, int, std::string, int, int>;
  std::set<T> got;
  for (int a : g.arcs_of(ArcClass::Segment)) {
    const Vertex& t = g.vertices[g.arcs[a].tail];
    const Vertex& h = g.vertices[g.arcs[a].head];
    got.insert({inst.network.stops[t.stop].id, t.time, t.layer, inst.network.stops[h.stop].id, h.time, h.layer});
  }
  const std::set<T> expected{
      {"s1", 2, 1, "s2", 3, 1}, {"s2", 3, 1, "s4", 6, 1}, {"s5", 1, 2, "s2", 2, 2}, {"s2", 2, 2, "s6", 4, 2}};
  bool dummy_ok = g.arcs_of(ArcClass::Dummy).size() == 1;
  if (dummy_ok) {
    const Arc& d = g.arcs[g.arcs_of(ArcClass::Dummy)[0]];
    dummy_ok = d.tail == g.origin[1] && d.head == g.destination[1] && g.vertices[d.tail].time == 0 &&
               g.vertices[d.head].time == 6;
  }
  const double t = seconds_since(t0);
  return {got == expected && dummy_ok && t < 1.0,
          fmt::format("{} F-arcs ({} expected, set equal: {}), dummy arc ok: {}, {:.3f}s", got.size(), expected.size(),
                      got == expected, dummy_ok, t)};
}

struct TinySuite {
  Outcome exact, root, sandwich, astar;
};

TinySuite tiny_suite(Audit& audit) {
  TinySuite out;
  const auto t0 = Clock::now();
  int mismatches = 0, root_mismatches = 0, bound_violations = 0, bound_checks = 0;
  long searches = 0, astar_mismatches = 0, admissibility_checks = 0, admissibility_violations = 0;
  int small_graphs = 0;
  double worst_root = 0.0;
  std::string first_mismatch;
  for (int seed = 1; seed <= kTinySeeds; ++seed) {
    const Instance inst = testing_support::tiny(seed);
    const ExpandedGraph g = build_graph(inst);
    const double opt = oracle::enumerate_optimum(g, inst).optimum;
    const double tol = 1e-6 * std::max(1.0, std::abs(opt));

    auto on_search = [&](const SearchRecord& rec) {
      ++searches;
      const double ref = oracle::dijkstra(g, *rec.cost, rec.source)[rec.target];
      const bool same = std::isinf(ref) ? std::isinf(rec.result) : std::abs(rec.result - ref) <= 1e-9;
      if (!same) ++astar_mismatches;
    };
    SolveConfig cfg = testing_support::exact_config();
    cfg.on_search = on_search;

    // Root column generation with our own pricer, so its heuristic can be
    // checked against the adapted costs of every search.
    const bool small = g.num_vertices() <= 200;
    small_graphs += small;
    {
      MasterState m(g, inst);
      Pricer pricer(g, inst);
      pricer.observer = [&](const SearchRecord& rec) {
        on_search(rec);
        if (!small || rec.target != g.destination[rec.request]) return;
        const auto to_target = oracle::dijkstra(g, *rec.cost, rec.target, true);
        const auto from_source = oracle::dijkstra(g, *rec.cost, rec.source);
        const auto& h = pricer.heuristic(rec.request);
        for (int v = 0; v < g.num_vertices(); ++v) {
          if (std::isinf(from_source[v]) || std::isinf(to_target[v])) continue;
          ++admissibility_checks;
          if (h[v] > to_target[v] + 1e-9) ++admissibility_violations;
        }
      };
      SolveConfig root_cfg = cfg;
      root_cfg.on_cg_iteration = [&](const CgProgress& p) {
        if (!p.full) return;
        ++bound_checks;
        if (p.lower_bound > opt + tol) ++bound_violations;
      };
      PricingState state(inst, 1.0);
      const CgResult cg = column_generation(m, pricer, state, root_cfg, Deadline(60.0));
      const lp::LpSolution relax = lp::solve_lp(build_arc_mip(g, inst).lp);
      const double diff = std::abs(cg.value - relax.objective);
      worst_root = std::max(worst_root, diff);
      if (!cg.converged || relax.status != lp::LpStatus::Optimal || diff > 1e-5) ++root_mismatches;
    }

    cfg.on_bnp_iteration = [&](const BnpProgress& p) {
      ++bound_checks;
      if (p.lower_bound > opt + tol || p.upper_bound < opt - tol) ++bound_violations;
    };
    const Solution bnp = branch_and_price(g, inst, cfg);
    cfg.on_bnp_iteration = nullptr;
    const Solution mip = solve_arc_mip(g, inst, cfg);
    const Solution pnb = price_and_branch(g, inst, cfg);
    for (const Solution* s : {&bnp, &mip}) {
      if (!std::isfinite(opt) || !close_rel(s->objective, opt, 1e-6)) {
        ++mismatches;
        if (first_mismatch.empty())
          first_mismatch = fmt::format(" (first: seed {} {} {} vs {})", seed, s->algorithm, s->objective, opt);
      }
    }
    if (pnb.objective < opt - tol) ++mismatches;  // a heuristic may not beat the optimum
    for (const Solution* s : {&bnp, &mip, &pnb}) audit.check(*s, g, inst, fmt::format("tiny {} {}", seed, s->algorithm));
  }
  const double t = seconds_since(t0);
  out.exact = {mismatches == 0 && t < 600.0,
               fmt::format("{} seeds, {} mismatches against enumeration{}, {:.1f}s", kTinySeeds, mismatches,
                           first_mismatch, t)};
  out.root = {root_mismatches == 0,
              fmt::format("{} seeds, {} mismatches, largest difference {:.2e}", kTinySeeds, root_mismatches, worst_root)};
  out.sandwich = {bound_violations == 0 && bound_checks > 0,
                  fmt::format("{} bound checks, {} violations", bound_checks, bound_violations)};
  out.astar = {astar_mismatches == 0 && searches > 0 && admissibility_violations == 0 && small_graphs > 0,
               fmt::format("{} searches, {} mismatches; admissibility on {} graphs: {} checks, {} violations", searches,
                           astar_mismatches, small_graphs, admissibility_checks, admissibility_violations)};
  return out;
}

Outcome partial_pricing() {
  int wins = 0, disagreements = 0;
  std::string rows;
  for (int k = 0; k < 15; ++k) {
    GeneratorConfig gc = preset("medium");
    gc.freight_requests = 40 + (k * 60) / 14;
    gc.freight_volume = 30.0 * gc.freight_requests;
    const Instance inst = generate_instance(gc, k + 1);
    const ExpandedGraph g = build_graph(inst);
    int cols[2];
    double value[2];
    for (int i = 0; i < 2; ++i) {
      SolveConfig cfg;
      cfg.phi = i == 0 ? 0.1 : 1.0;
      cfg.epsilon = 1e-9;
      MasterState m(g, inst);
      Pricer pricer(g, inst);
      PricingState state(inst, cfg.phi);
      const CgResult cg = column_generation(m, pricer, state, cfg, Deadline(600.0));
      cols[i] = cg.columns_added;
      value[i] = cg.value;
    }
    if (cols[0] < cols[1]) ++wins;
    if (!close_rel(value[0], value[1], 1e-3)) ++disagreements;
    rows += fmt::format(" {}:{}/{}", gc.freight_requests, cols[0], cols[1]);
  }
  return {wins >= 12 && disagreements == 0,
          fmt::format("fewer columns at phi 0.1 in {}/15 seeds, {} value disagreements; freight:cols(0.1)/cols(1.0){}",
                      wins, disagreements, rows)};
}

Outcome cost_derivation() {
  const CostModel c = derive_costs(EconomicParameters{});
  const bool ok = std::abs(c.design_cost - 68.18) <= 0.5 && std::abs(c.penalty_per_unit - 1.92) <= 1e-6 &&
                  std::abs(c.egress_cost - 0.8418) <= 1e-6;
  return {ok, fmt::format("c_h {:.4f}, penalty(q=1) {:.6f}, egress {:.6f}", c.design_cost, c.penalty_per_unit,
                          c.egress_cost)};
}

Outcome sensitivity(Audit& audit) {
  const Instance base = generate_instance(preset("small"), 1);
  SolveConfig cfg = testing_support::exact_config();
  cfg.epsilon = 1e-6;
  const SweepGrid grid;
  const SweepResult res = sensitivity_sweep({base}, grid, Algorithm::BranchAndPrice, cfg);
  const auto& s = res.share;
  int violations = 0, failed = 0;
  double worst = 0.0;
  for (size_t i = 0; i < s.size(); ++i)
    for (size_t k = 0; k < s[i].size(); ++k) {
      failed += res.failures[i][k];
      if (k + 1 < s[i].size() && s[i][k + 1] > s[i][k] + 1e-9) {
        ++violations;
        worst = std::max(worst, s[i][k + 1] - s[i][k]);
      }
      if (i + 1 < s.size() && s[i + 1][k] < s[i][k] - 1e-9) {
        ++violations;
        worst = std::max(worst, s[i][k] - s[i + 1][k]);
      }
    }
  const bool monotone = violations == 0 || (violations == 1 && worst <= 0.02);

  // Leftmost column: when every request's cheapest transit route costs more
  // than its penalty, everything must be rejected.
  EconomicParameters low = grid.base;
  low.truck_externality = grid.truck_externality.front();
  bool all_routes_dearer = true;
  for (double ct : grid.transit_cost) {
    low.transit_cost = ct;
    const Instance inst = with_economics(base, low);
    const ExpandedGraph g = build_graph(inst);
    std::vector<double> cost(g.num_arcs(), oracle::kInf);
    for (size_t r = 0; r < inst.requests.size(); ++r) {
      if (!inst.requests[r].is_freight()) continue;
      for (int a : g.freight_arcs) {
        const int owner = g.arcs[a].request;
        const bool usable = g.arcs[a].cls != ArcClass::Dummy && (owner < 0 || owner == static_cast<int>(r));
        cost[a] = usable ? g.arcs[a].cost : oracle::kInf;
      }
      const double route = oracle::dijkstra(g, cost, g.origin[r])[g.destination[r]];
      if (route <= inst.penalty(inst.requests[r]) / inst.requests[r].demand) all_routes_dearer = false;
    }
    // Audit the cell solutions too.
    const Solution sol = branch_and_price(g, inst, cfg);
    audit.check(sol, g, inst, fmt::format("sweep c_T {}", ct));
  }
  bool first_column_one = true;
  for (const auto& row : s) first_column_one = first_column_one && std::abs(row.front() - 1.0) <= 1e-12;
  std::string table;
  for (const auto& row : s) {
    table += " [";
    for (size_t k = 0; k < row.size(); ++k) table += fmt::format("{}{:.3f}", k ? " " : "", row[k]);
    table += "]";
  }
  const bool leftmost_ok = !all_routes_dearer || first_column_one;
  return {monotone && leftmost_ok && failed == 0 && first_column_one,
          fmt::format("{} violations (largest {:.3f}), {} failed cells, share at 0.05 = 1.000: {} (routes dearer than "
                      "penalty: {});{}",
                      violations, worst, failed, first_column_one, all_routes_dearer, table)};
}

void extra_audits(Audit& audit) {
  const Instance fig5 = testing_support::fig5();
  const ExpandedGraph g5 = build_graph(fig5);
  for (auto solver : {solve_arc_mip, price_and_branch, branch_and_price})
    audit.check(solver(g5, fig5, testing_support::exact_config()), g5, fig5, "fig5");
  for (int seed = 1; seed <= 3; ++seed) {
    const Instance inst = generate_instance(preset("small"), seed);
    const ExpandedGraph g = build_graph(inst);
    SolveConfig cfg;
    cfg.time_limit = 20.0;
    cfg.branch_reserve = 5.0;
    cfg.record_timing = false;
    audit.check(price_and_branch(g, inst, cfg), g, inst, fmt::format("small {} pnb", seed));
    audit.check(branch_and_price(g, inst, cfg), g, inst, fmt::format("small {} bnp", seed));
  }
  const Instance medium = generate_instance(preset("medium"), 1);
  const ExpandedGraph gm = build_graph(medium);
  SolveConfig cfg;
  cfg.time_limit = 10.0;
  cfg.branch_reserve = 3.0;
  audit.check(price_and_branch(gm, medium, cfg), gm, medium, "medium pnb");
  audit.check(branch_and_price(gm, medium, cfg), gm, medium, "medium bnp");
}

Outcome determinism() {
  auto run = [] {
    std::string out = dump_instance(generate_instance(preset("small"), 7));
    const Instance inst = parse_instance(out);
    const ExpandedGraph g = build_graph(inst);
    SolveConfig cfg;
    cfg.time_limit = 60.0;
    cfg.branch_reserve = 10.0;
    cfg.record_timing = false;
    for (auto solver : {price_and_branch, branch_and_price}) {
      const Solution s = solver(g, inst, cfg);
      const UtilizationSeries u = utilization_report(s, g, inst);
      out += solution_json(s, g, inst) + log_csv(s) + temporal_csv(u) + spatial_csv(u, inst) + vehicles_csv(u, g, inst);
    }
    SweepGrid grid;
    grid.truck_externality = {0.05, 1.0};
    grid.transit_cost = {0.0, 1.0};
    out += sweep_csv(sensitivity_sweep({inst}, grid, Algorithm::BranchAndPrice, cfg));
    return out;
  };
  const std::string a = run();
  const std::string b = run();
  return {a == b, fmt::format("two runs, {} bytes each, identical: {}", a.size(), a == b)};
}

}  // namespace

int main() {
  Audit audit;
  report(1, "FIG5 graph reconstruction", fig5_graph());
  const TinySuite tiny = tiny_suite(audit);
  report(2, "oracle equivalence on the tiny suite", tiny.exact);
  report(3, "root equivalence with the arc relaxation", tiny.root);
  report(4, "bound sandwich", tiny.sandwich);
  report(5, "A* exactness and heuristic admissibility", tiny.astar);
  report(6, "partial pricing trend", partial_pricing());
  report(7, "cost derivations", cost_derivation());
  const Outcome sweep = sensitivity(audit);
  report(8, "sensitivity monotonicity", sweep);
  extra_audits(audit);
  report(9, "solution audit",
         {audit.violations == 0, fmt::format("{} solutions, {} violations{}", audit.solutions, audit.violations,
                                             audit.first.empty() ? "" : " (first: " + audit.first + ")")});
  report(10, "determinism", determinism());
  fmt::print("{} of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
