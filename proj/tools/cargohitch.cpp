#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "cargohitch/graph.hpp"
#include "cargohitch/model.hpp"
#include "cargohitch/report.hpp"
#include "cargohitch/solve.hpp"

namespace fs = std::filesystem;
using namespace cargohitch;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("path", path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string default_out_dir() {
  const char* env = std::getenv("CARGOHITCH_OUT_DIR");
  return env && *env ? env : "out";
}

// A generator config: a preset name plus optional field overrides.
GeneratorConfig load_generator_config(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config", path, e.what());
  }
  GeneratorConfig c = preset(j.value("preset", std::string("small")));
  try {
    auto set = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    set("name", c.name);
    set("lines", c.lines);
    set("stops_per_line", c.stops_per_line);
    set("stop_spacing", c.stop_spacing);
    set("vehicles_per_line", c.vehicles_per_line);
    set("headway", c.headway);
    set("vehicle_speed", c.vehicle_speed);
    set("units", c.units);
    set("line_end_terminals", c.line_end_terminals);
    set("freight_requests", c.freight_requests);
    set("passenger_requests", c.passenger_requests);
    set("freight_volume", c.freight_volume);
    set("passenger_demand", c.passenger_demand);
    set("depots", c.depots);
    set("depot_ring_min", c.depot_ring_min);
    set("depot_ring_max", c.depot_ring_max);
    set("horizon", c.horizon);
    if (j.contains("capacity_mix")) {
      c.capacity_mix.clear();
      for (const auto& e : j["capacity_mix"]) c.capacity_mix.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    }
    if (j.contains("costs")) {
      const auto& k = j["costs"];
      c.costs.design_cost = k.value("design_cost", c.costs.design_cost);
      c.costs.penalty_per_unit = k.value("penalty_per_unit", c.costs.penalty_per_unit);
      c.costs.routing_rate = k.value("routing_rate", c.costs.routing_rate);
      c.costs.transit_cost = k.value("transit_cost", c.costs.transit_cost);
      c.costs.egress_cost = k.value("egress_cost", c.costs.egress_cost);
      c.costs.access_cost = k.value("access_cost", c.costs.access_cost);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config", path, e.what());
  }
  return c;
}

struct SolveFlags {
  std::string algo = "bnp";
  double time_limit = 5400.0;
  double branch_reserve = 900.0;
  double phi = 1.0;
  double epsilon = 1e-3;
  std::uint64_t seed = 1;
  bool no_timing = false;

  void add_to(CLI::App* app) {
    app->add_option("--algo", algo, "mip, pnb or bnp")->capture_default_str();
    app->add_option("--time-limit", time_limit, "seconds")->capture_default_str();
    app->add_option("--branch-reserve", branch_reserve, "seconds kept for branching (pnb)")->capture_default_str();
    app->add_option("--phi", phi, "share of pricing problems per partial round")->capture_default_str();
    app->add_option("--epsilon", epsilon, "relative gap tolerance")->capture_default_str();
    app->add_option("--seed", seed)->capture_default_str();
    app->add_flag("--no-timing", no_timing, "write zero times so outputs are reproducible");
  }

  [[nodiscard]] SolveConfig config() const {
    SolveConfig c;
    c.time_limit = time_limit;
    // A reserve longer than the whole budget keeps the default 1:6 ratio.
    c.branch_reserve = branch_reserve < time_limit ? branch_reserve : time_limit / 6.0;
    c.phi = phi;
    c.epsilon = epsilon;
    c.seed = seed;
    c.record_timing = !no_timing;
    c.validate();
    return c;
  }
};

std::string format_number(double v) { return std::isfinite(v) ? fmt::format("{:.6f}", v) : std::string("inf"); }

int run_generate(const std::string& preset_name, const std::string& config_file, std::uint64_t seed,
                 const std::string& output) {
  const GeneratorConfig cfg = config_file.empty() ? preset(preset_name) : load_generator_config(config_file);
  const Instance inst = generate_instance(cfg, seed);
  save_instance(inst, output);
  fmt::print("wrote {} ({} freight, {} passenger requests, {} vehicles)\n", output, inst.num_freight(),
             inst.num_passenger(), inst.network.routes.size());
  return 0;
}

int run_solve(const std::string& instance_path, const SolveFlags& flags, const std::string& scenario_name,
              const std::string& out_dir) {
  const Algorithm algo = parse_algorithm(flags.algo);
  const SolveConfig cfg = flags.config();
  Instance inst = load_instance(instance_path);
  if (!scenario_name.empty()) inst = with_economics(inst, scenario(scenario_name));
  const ExpandedGraph graph = build_graph(inst);
  const Solution s = solve(algo, graph, inst, cfg);
  const std::string stem = fs::path(instance_path).stem().string() + "-" + flags.algo;
  const fs::path dir(out_dir);
  write_file(dir / (stem + "-solution.json"), solution_json(s, graph, inst));
  write_file(dir / (stem + "-log.csv"), log_csv(s));
  fmt::print("status {}  UB {}  LB {}  gap {}  nodes {}  columns {}\n", s.status, format_number(s.objective),
             format_number(s.lower_bound), format_number(s.gap), s.nodes, s.columns);
  const std::vector<std::string> issues = check_solution(s, graph, inst);
  for (const std::string& issue : issues) fmt::print(stderr, "checker: {}\n", issue);
  return issues.empty() ? 0 : 1;
}

int run_sweep(const std::string& instance_path, const std::string& preset_name, int seeds,
              const std::string& grid_file, const SolveFlags& flags, const std::string& out_dir) {
  const SweepGrid grid = grid_file.empty() ? SweepGrid{} : load_sweep_grid(grid_file);
  grid.validate();
  std::vector<Instance> instances;
  std::string stem;
  if (!instance_path.empty()) {
    instances.push_back(load_instance(instance_path));
    stem = fs::path(instance_path).stem().string();
  } else {
    const GeneratorConfig cfg = preset(preset_name);
    for (int k = 0; k < seeds; ++k) instances.push_back(generate_instance(cfg, flags.seed + k));
    stem = preset_name;
  }
  const SweepResult res = sensitivity_sweep(instances, grid, parse_algorithm(flags.algo), flags.config());
  const std::string csv = sweep_csv(res);
  write_file(fs::path(out_dir) / (stem + "-sweep.csv"), csv);
  fmt::print("{}", csv);
  int failures = 0;
  for (const auto& row : res.failures)
    for (int f : row) failures += f;
  if (failures > 0) fmt::print(stderr, "{} cell solves failed\n", failures);
  return 0;
}

int run_report(const std::string& instance_path, const std::string& solution_path, int bucket,
               const std::string& out_dir) {
  const Instance inst = load_instance(instance_path);
  const ExpandedGraph graph = build_graph(inst);
  const Solution s = parse_solution(read_file(solution_path), graph, inst);
  const UtilizationSeries u = utilization_report(s, graph, inst, bucket);
  const std::string stem = fs::path(solution_path).stem().string();
  const fs::path dir(out_dir);
  write_file(dir / (stem + "-temporal.csv"), temporal_csv(u));
  write_file(dir / (stem + "-spatial.csv"), spatial_csv(u, inst));
  write_file(dir / (stem + "-vehicles.csv"), vehicles_csv(u, graph, inst));
  fmt::print("rejection share {:.3f}\n", rejection_share(s, inst));
  return 0;
}

int run_ingest(const std::string& directory, const std::vector<std::string>& terminals, int window_start,
               int window_end, int units, std::uint64_t seed, const std::string& output) {
  GtfsOptions opts;
  opts.window_start = window_start;
  opts.window_end = window_end;
  opts.terminals = terminals;
  opts.units = units;
  opts.seed = seed;
  Instance inst;
  inst.network = ingest_gtfs_subset(directory, opts);
  save_instance(inst, output);
  fmt::print("wrote {} ({} stops, {} vehicles)\n", output, inst.network.stops.size(), inst.network.routes.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cargo-hitching network design solver"};
  app.require_subcommand(1);
  const std::string env_out = default_out_dir();

  std::string preset_name = "small", config_file, output = "instance.json";
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("generate", "generate a synthetic instance");
  gen->add_option("--preset", preset_name, "tiny-oracle, small or medium")->capture_default_str();
  gen->add_option("--config", config_file, "JSON generator config (a preset plus overrides)");
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--output", output)->capture_default_str();

  std::string instance_path, scenario_name, out_dir = env_out;
  SolveFlags flags;
  auto* sol = app.add_subcommand("solve", "solve an instance");
  sol->add_option("--instance", instance_path)->required();
  flags.add_to(sol);
  sol->add_option("--scenario", scenario_name, "optimistic or pessimistic cost scenario");
  sol->add_option("--out-dir", out_dir)->capture_default_str();

  std::string grid_file, sweep_preset = "small", sweep_instance;
  int sweep_seeds = 3;
  SolveFlags sweep_flags;
  sweep_flags.time_limit = 60.0;
  sweep_flags.branch_reserve = 10.0;
  auto* swp = app.add_subcommand("sweep", "rejection share over a cost grid");
  swp->add_option("--instance", sweep_instance, "instance file; otherwise instances are generated from --preset");
  swp->add_option("--preset", sweep_preset)->capture_default_str();
  swp->add_option("--seeds", sweep_seeds, "generated instances per cell")->capture_default_str()->check(CLI::PositiveNumber);
  swp->add_option("--grid-file", grid_file, "JSON grid");
  sweep_flags.add_to(swp);
  swp->add_option("--out-dir", out_dir)->capture_default_str();

  std::string solution_path;
  int bucket = 300;
  auto* rep = app.add_subcommand("report", "utilization series of a solution");
  rep->add_option("--instance", instance_path)->required();
  rep->add_option("--solution", solution_path)->required();
  rep->add_option("--bucket", bucket, "seconds per temporal bucket")->capture_default_str()->check(CLI::PositiveNumber);
  rep->add_option("--out-dir", out_dir)->capture_default_str();

  std::string gtfs_dir;
  std::vector<std::string> terminals;
  int window_start = 0, window_end = 24 * 3600, units = 2;
  std::uint64_t ingest_seed = 1;
  auto* ing = app.add_subcommand("ingest", "build a network from a GTFS subset");
  ing->add_option("--gtfs", gtfs_dir)->required();
  ing->add_option("--terminal", terminals, "freight terminal stop id (repeatable)");
  ing->add_option("--window-start", window_start)->capture_default_str();
  ing->add_option("--window-end", window_end)->capture_default_str();
  ing->add_option("--units", units)->capture_default_str();
  ing->add_option("--seed", ingest_seed)->capture_default_str();
  ing->add_option("--output", output)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return run_generate(preset_name, config_file, gen_seed, output);
    if (*sol) return run_solve(instance_path, flags, scenario_name, out_dir);
    if (*swp) return run_sweep(sweep_instance, sweep_preset, sweep_seeds, grid_file, sweep_flags, out_dir);
    if (*rep) return run_report(instance_path, solution_path, bucket, out_dir);
    if (*ing) return run_ingest(gtfs_dir, terminals, window_start, window_end, units, ingest_seed, output);
  } catch (const ValidationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const IngestError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 1;
}
