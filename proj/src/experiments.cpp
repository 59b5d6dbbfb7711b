#include "mnf/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>

namespace mnf {

CompareResult compare(const Scenario &scenario, const SimConfig &cfg) {
  SimConfig mnf_cfg = cfg;
  mnf_cfg.mode = Mode::Mnf;
  SimConfig dnf_cfg = cfg;
  dnf_cfg.mode = Mode::Dnf;
  CompareResult out{run(scenario, mnf_cfg), run(scenario, dnf_cfg), {}};
  out.kappa = kappa(out.mnf.convergence_times(), out.dnf.convergence_times());
  return out;
}

double SuiteColumn::alpha_dagger_median() const {
  if (alpha_daggers.empty()) return 0.0;
  std::vector<double> v = alpha_daggers;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<SuiteColumn> run_suite(const std::vector<SuiteEntry> &entries, const SuiteOptions &opts) {
  std::vector<SuiteColumn> out;
  for (const auto &entry : entries) {
    SuiteColumn col;
    col.label = entry.label;
    col.spec = entry.spec;
    col.spec.seed = opts.seed;
    col.params = entry.params;
    col.params.gamma = opts.base.params.gamma;
    try {
      const Scenario scenario = generate(col.spec, col.params);
      col.density = density(scenario);
      SimConfig cfg = opts.base;
      cfg.params = col.params;
      CompareResult cmp = compare(scenario, cfg);
      col.kappa = cmp.kappa.value;
      col.kappa_reason = cmp.kappa.reason;
      for (const auto &a : cmp.mnf.agents) col.alpha_daggers.push_back(a.alpha_dagger);
      const auto mt = cmp.mnf.convergence_times();
      const auto dt = cmp.dnf.convergence_times();
      col.mnf_makespan = makespan(mt);
      col.dnf_makespan = makespan(dt);
      col.mnf_completed = summarize(scenario, cmp.mnf).completed;
      col.dnf_completed = summarize(scenario, cmp.dnf).completed;
      if (opts.keep_runs) col.runs = std::move(cmp);
    } catch (const std::exception &e) {
      col.error = e.what();
    }
    out.push_back(std::move(col));
  }
  return out;
}

std::vector<SweepPoint> sweep_alpha(const Scenario &scenario, const std::vector<double> &multipliers,
                                    const SimConfig &cfg) {
  if (multipliers.empty()) throw ScenarioError("multiplier list is empty");
  for (double m : multipliers) {
    if (!(m >= 1.0)) throw ScenarioError("multipliers must be >= 1");
  }
  SimConfig base = cfg;
  base.mode = Mode::Mnf;
  if (!base.alpha_daggers && !base.fixed_alpha) {
    std::vector<double> daggers;
    const CoalitionPartition partition(scenario);
    const std::vector<Vec2> starts = scenario.start_positions();
    for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
      const FieldContext ctx = make_field_context(scenario, starts, i, partition, base.params);
      const double r = confinement_radius(scenario, i, base.include_agent_targets);
      daggers.push_back(solve_alpha_dagger(ctx, scenario.workspace, r, base.solver).alpha_dagger);
    }
    base.alpha_daggers = std::move(daggers);
  }
  std::vector<SweepPoint> out;
  for (double m : multipliers) {
    SimConfig c = base;
    c.alpha_multiplier = m;
    const RunResult r = run(scenario, c);
    SweepPoint p;
    p.multiplier = m;
    const auto times = r.convergence_times();
    p.makespan = makespan(times);
    p.all_converged = r.all_converged;
    for (const auto &t : times) p.total_steps += t.value_or(c.max_steps);
    out.push_back(p);
  }
  return out;
}

std::string format_suite_table(const std::vector<SuiteColumn> &columns) {
  auto num = [](double v, const char *fmt) {
    char b[32];
    std::snprintf(b, sizeof(b), fmt, v);
    return std::string(b);
  };
  auto steps = [](const std::optional<std::size_t> &t) {
    return t ? std::to_string(*t) : std::string("-");
  };
  std::vector<std::pair<const char *, std::function<std::string(const SuiteColumn &)>>> rows = {
      {"entry", [](const SuiteColumn &c) { return c.label; }},
      {"agents", [](const SuiteColumn &c) { return std::to_string(c.spec.n_agents); }},
      {"obstacles", [](const SuiteColumn &c) { return std::to_string(c.spec.n_obstacles); }},
      {"area", [&](const SuiteColumn &c) {
         return num(c.spec.width, "%.4g") + "x" + num(c.spec.height, "%.4g");
       }},
      {"coalitions", [](const SuiteColumn &c) { return std::to_string(c.spec.coalitions); }},
      {"density", [&](const SuiteColumn &c) { return num(c.density, "%.4f"); }},
      {"beta", [&](const SuiteColumn &c) { return num(c.params.beta, "%g"); }},
      {"lambda1", [&](const SuiteColumn &c) { return num(c.params.lambda1, "%g"); }},
      {"lambda2", [&](const SuiteColumn &c) { return num(c.params.lambda2, "%g"); }},
      {"lambda3", [&](const SuiteColumn &c) { return num(c.params.lambda3, "%g"); }},
      {"kappa", [&](const SuiteColumn &c) {
         if (c.kappa) return num(*c.kappa, "%.3f");
         return std::string(c.error.empty() ? "none" : "error");
       }},
      {"alpha_dag", [&](const SuiteColumn &c) { return num(c.alpha_dagger_median(), "%.3f"); }},
      {"mnf_steps", [&](const SuiteColumn &c) { return steps(c.mnf_makespan); }},
      {"dnf_steps", [&](const SuiteColumn &c) { return steps(c.dnf_makespan); }},
  };

  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(columns.size(), 0);
  for (const auto &[name, fn] : rows) {
    std::vector<std::string> line;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      line.push_back(fn(columns[i]));
      width[i] = std::max(width[i], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  std::ostringstream os;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << rows[r].first << std::string(12 - std::string(rows[r].first).size(), ' ');
    for (std::size_t i = 0; i < columns.size(); ++i) {
      os << std::string(width[i] + 2 - cells[r][i].size(), ' ') << cells[r][i];
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace mnf
