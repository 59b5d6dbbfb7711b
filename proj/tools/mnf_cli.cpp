// Command-line front end: run, compare, suite, sweep-alpha, generate, criticality.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mnf/coordinator.hpp"
#include "mnf/criticality.hpp"
#include "mnf/experiments.hpp"
#include "mnf/io.hpp"
#include "mnf/metrics.hpp"
#include "mnf/scenario.hpp"
#include "mnf/svg.hpp"

namespace fs = std::filesystem;
using namespace mnf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct CommonFlags {
  std::string mode = "mnf";
  std::uint64_t seed = 7;
  double gamma = 0.0;
  double epsilon = 0.0;
  double alpha_cap = 1e6;
  int grid_density = 80;
  bool plots = false;
  bool resolve_alpha = false;
  bool sequential = false;
  std::string association = "initial";
  double dnf_k = DnfParams{}.k;
  double dnf_sensing = 0.0;
  std::size_t max_steps = 20000;
  std::size_t stall_window = SimConfig{}.stall_window;
  std::string out = "results";

  void attach(CLI::App *app, bool with_mode) {
    if (with_mode) {
      app->add_option("--mode", mode, "mnf or dnf")->check(CLI::IsMember({"mnf", "dnf"}));
    }
    app->add_option("--seed", seed, "generator seed");
    app->add_option("--gamma", gamma, "gradient step factor (default: scenario value)");
    app->add_option("--epsilon", epsilon, "convergence distance (default: 1e-3 x diagonal)");
    app->add_option("--alpha-cap", alpha_cap, "largest confinement factor tried");
    app->add_option("--grid-density", grid_density, "critical-point seed grid per axis");
    app->add_flag("--plots", plots, "write SVG plots");
    app->add_flag("--resolve-alpha-each-step", resolve_alpha, "re-solve alpha every step");
    app->add_flag("--sequential", sequential, "plan agents one at a time");
    app->add_option("--solver-association", association,
                    "association sum seen by the alpha solver: initial or vanished")
        ->check(CLI::IsMember({"initial", "vanished"}));
    app->add_option("--dnf-k", dnf_k, "navigation-function exponent k");
    app->add_option("--dnf-sensing", dnf_sensing, "navigation-function sensing radius");
    app->add_option("--max-steps", max_steps, "step budget per run");
    app->add_option("--stall-window", stall_window,
                    "steps without progress before a planning agent doubles alpha (0: never)");
    app->add_option("--out", out, "output directory");
  }

  SimConfig config(const PotentialParams &params) const {
    SimConfig cfg;
    cfg.params = params;
    if (gamma > 0.0) cfg.params.gamma = gamma;
    cfg.mode = mode == "dnf" ? Mode::Dnf : Mode::Mnf;
    cfg.convergence_epsilon = epsilon;
    cfg.max_steps = max_steps;
    cfg.stall_window = stall_window;
    cfg.resolve_alpha_each_step = resolve_alpha;
    cfg.sequential = sequential;
    cfg.solver.alpha_cap = alpha_cap;
    cfg.solver.search.grid = grid_density;
    cfg.solver.vanished_association = association == "vanished";
    cfg.dnf.k = dnf_k;
    cfg.dnf.sensing_radius = dnf_sensing;
    return cfg;
  }
};

std::string csv_of(const RunResult &r) {
  std::ostringstream os;
  write_trajectories_csv(os, r);
  return os.str();
}

void write_run(const fs::path &dir, const Scenario &scenario, const RunResult &result,
               const RunResult *baseline, bool plots) {
  fs::create_directories(dir);
  write_text_file(dir / "trajectories.csv", csv_of(result));
  json metrics = metrics_to_json(summarize(scenario, result, baseline));
  write_text_file(dir / "metrics.json", metrics.dump(2) + "\n");
  if (result.mode == Mode::Mnf) {
    json reports = json::array();
    for (const auto &rep : result.criticality) reports.push_back(report_to_json(rep));
    write_text_file(dir / "criticality.json", reports.dump(2) + "\n");
  }
  if (plots) {
    write_text_file(dir / "trajectories.svg", trajectory_svg(scenario, result));
    write_text_file(dir / "potentials.svg", potential_svg(result));
  }
}

void print_outcome(const char *label, const RunResult &r) {
  std::size_t done = 0;
  for (const auto &a : r.agents) done += a.converged() ? 1 : 0;
  std::printf("%s: %zu/%zu agents converged in %zu steps\n", label, done, r.agents.size(), r.steps);
  if (!r.all_converged) {
    for (const auto &a : r.agents) {
      if (!a.converged()) {
        std::printf("  agent %d unconverged, final distance %.6g\n", a.agent_id, a.final_distance);
      }
    }
  }
}

std::vector<double> parse_multipliers(const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception &) {
      throw ScenarioError("bad multiplier '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Meta navigation function multi-agent coordinator"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string scenario_path;

  auto *run_cmd = app.add_subcommand("run", "simulate one scenario");
  run_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  flags.attach(run_cmd, true);

  GeneratorSpec gen;
  auto *cmp_cmd = app.add_subcommand("compare", "run MNF and DNF, report kappa");
  cmp_cmd->add_option("--scenario", scenario_path, "scenario JSON file");
  cmp_cmd->add_option("--agents", gen.n_agents, "generate: agent count");
  cmp_cmd->add_option("--obstacles", gen.n_obstacles, "generate: obstacle count");
  cmp_cmd->add_option("--width", gen.width, "generate: workspace width");
  cmp_cmd->add_option("--height", gen.height, "generate: workspace height");
  cmp_cmd->add_option("--coalitions", gen.coalitions, "generate: coalition count");
  flags.attach(cmp_cmd, false);

  std::string suite_id;
  double suite_scale = 1.0;
  auto *suite_cmd = app.add_subcommand("suite", "run the table1 or table2 experiment suite");
  suite_cmd->add_option("suite", suite_id, "table1 or table2")
      ->required()
      ->check(CLI::IsMember({"table1", "table2"}));
  suite_cmd->add_option("--scale", suite_scale, "scale counts and area (0.5 = half scale)");
  flags.attach(suite_cmd, false);

  std::string multipliers_text;
  auto *sweep_cmd = app.add_subcommand("sweep-alpha", "MNF runs at multiples of alpha-dagger");
  sweep_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  sweep_cmd->add_option("--multipliers", multipliers_text, "comma-separated, each >= 1")->required();
  flags.attach(sweep_cmd, false);

  std::string gen_out = "scenario.json";
  auto *gen_cmd = app.add_subcommand("generate", "write a random scenario");
  gen_cmd->add_option("--agents", gen.n_agents, "agent count");
  gen_cmd->add_option("--obstacles", gen.n_obstacles, "obstacle count");
  gen_cmd->add_option("--width", gen.width, "workspace width");
  gen_cmd->add_option("--height", gen.height, "workspace height");
  gen_cmd->add_option("--coalitions", gen.coalitions, "coalition count");
  gen_cmd->add_option("--seed", flags.seed, "generator seed");
  gen_cmd->add_option("--out", gen_out, "output file");

  int crit_agent = 0;
  auto *crit_cmd = app.add_subcommand("criticality", "dump one agent's criticality report");
  crit_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  crit_cmd->add_option("--agent", crit_agent, "agent id");
  flags.attach(crit_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) {
      const Scenario scenario = load_scenario(scenario_path);
      const SimConfig cfg = flags.config(scenario.params);
      const RunResult result = run(scenario, cfg);
      write_run(flags.out, scenario, result, nullptr, flags.plots);
      print_outcome(std::string(to_string(cfg.mode)).c_str(), result);
    } else if (*cmp_cmd) {
      Scenario scenario;
      if (!scenario_path.empty()) {
        scenario = load_scenario(scenario_path);
      } else {
        if (gen.n_agents == 0) throw ScenarioError("compare needs --scenario or --agents");
        gen.seed = flags.seed;
        scenario = generate(gen);
      }
      const fs::path out = flags.out;
      save_scenario(out / "scenario.json", scenario);
      const CompareResult cmp = compare(scenario, flags.config(scenario.params));
      write_run(out / "mnf", scenario, cmp.mnf, &cmp.dnf, flags.plots);
      write_run(out / "dnf", scenario, cmp.dnf, &cmp.mnf, flags.plots);
      json k = {{"kappa", cmp.kappa.value ? json(*cmp.kappa.value) : json(nullptr)}};
      if (!cmp.kappa.reason.empty()) k["reason"] = cmp.kappa.reason;
      write_text_file(out / "kappa.json", k.dump(2) + "\n");
      print_outcome("mnf", cmp.mnf);
      print_outcome("dnf", cmp.dnf);
      if (cmp.kappa.value) std::printf("kappa = %.6f\n", *cmp.kappa.value);
      else std::printf("kappa = none (%s)\n", cmp.kappa.reason.c_str());
    } else if (*suite_cmd) {
      auto entries = suite_id == "table1" ? table1_suite() : table2_suite();
      if (suite_scale != 1.0) entries = scaled_suite(entries, suite_scale);
      SuiteOptions opts;
      opts.seed = flags.seed;
      opts.base = flags.config(PotentialParams{});
      opts.keep_runs = true;
      const auto columns = run_suite(entries, opts);
      const fs::path out = flags.out;
      json report = json::array();
      for (std::size_t c = 0; c < columns.size(); ++c) {
        const auto &col = columns[c];
        json entry = {{"label", col.label},
                      {"agents", col.spec.n_agents},
                      {"obstacles", col.spec.n_obstacles},
                      {"width", col.spec.width},
                      {"height", col.spec.height},
                      {"coalitions", col.spec.coalitions},
                      {"density", col.density},
                      {"lambda2", col.params.lambda2},
                      {"lambda3", col.params.lambda3},
                      {"kappa", col.kappa ? json(*col.kappa) : json(nullptr)},
                      {"alpha_dagger_median", col.alpha_dagger_median()},
                      {"alpha_daggers", col.alpha_daggers}};
        if (!col.kappa_reason.empty()) entry["kappa_reason"] = col.kappa_reason;
        if (!col.error.empty()) entry["error"] = col.error;
        report.push_back(entry);
        if (col.runs) {
          const fs::path dir = out / ("entry" + std::to_string(c + 1));
          const Scenario scenario = generate(col.spec, col.params);
          save_scenario(dir / "scenario.json", scenario);
          write_run(dir / "mnf", scenario, col.runs->mnf, &col.runs->dnf, flags.plots);
          write_run(dir / "dnf", scenario, col.runs->dnf, &col.runs->mnf, flags.plots);
        }
      }
      write_text_file(out / "report.json", report.dump(2) + "\n");
      const std::string table = format_suite_table(columns);
      write_text_file(out / "report.txt", table);
      std::cout << table;
    } else if (*sweep_cmd) {
      const auto multipliers = parse_multipliers(multipliers_text);
      if (multipliers.empty()) {
        std::cerr << "error: --multipliers needs at least one value\n";
        return kExitUsage;
      }
      const Scenario scenario = load_scenario(scenario_path);
      const auto points = sweep_alpha(scenario, multipliers, flags.config(scenario.params));
      std::ostringstream csv;
      csv << "multiplier,makespan,total_steps,all_converged\n";
      for (const auto &p : points) {
        csv << format_number(p.multiplier) << ','
            << (p.makespan ? std::to_string(*p.makespan) : std::string()) << ',' << p.total_steps
            << ',' << (p.all_converged ? "true" : "false") << '\n';
      }
      write_text_file(fs::path(flags.out) / "sweep.csv", csv.str());
      std::cout << csv.str();
    } else if (*gen_cmd) {
      gen.seed = flags.seed;
      save_scenario(gen_out, generate(gen));
    } else if (*crit_cmd) {
      const Scenario scenario = load_scenario(scenario_path);
      std::size_t index = scenario.agents.size();
      for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
        if (scenario.agents[i].id == crit_agent) index = i;
      }
      if (index == scenario.agents.size()) throw ScenarioError("unknown agent id");
      const SimConfig cfg = flags.config(scenario.params);
      const CoalitionPartition partition(scenario);
      const auto starts = scenario.start_positions();
      const FieldContext ctx = make_field_context(scenario, starts, index, partition, cfg.params);
      const double r = confinement_radius(scenario, index);
      const CriticalityReport rep = solve_alpha_dagger(ctx, scenario.workspace, r, cfg.solver);
      const std::string text = report_to_json(rep).dump(2) + "\n";
      write_text_file(fs::path(flags.out) / "criticality.json", text);
      std::cout << text;
    }
  } catch (const ScenarioError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalFault &e) {
    std::cerr << "numerical fault: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}
