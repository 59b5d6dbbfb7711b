#include "mnf/metrics.hpp"

#include <algorithm>

namespace mnf {

std::optional<std::size_t> makespan(std::span<const std::optional<std::size_t>> times) {
  std::size_t worst = 0;
  for (const auto &t : times) {
    if (!t) return std::nullopt;
    worst = std::max(worst, *t);
  }
  return worst;
}

KappaResult kappa(std::span<const std::optional<std::size_t>> mnf_times,
                  std::span<const std::optional<std::size_t>> dnf_times) {
  if (mnf_times.empty() || dnf_times.empty()) return {std::nullopt, "no agents"};
  const auto m = makespan(mnf_times);
  if (!m) return {std::nullopt, "mnf run has unconverged agents"};
  const auto d = makespan(dnf_times);
  if (!d) return {std::nullopt, "dnf run has unconverged agents"};
  if (*d == 0) return {std::nullopt, "dnf run converged in zero steps"};
  return {static_cast<double>(*m) / static_cast<double>(*d), {}};
}

double density(const Scenario &scenario) {
  const double area = scenario.workspace.area();
  if (!(area > 0.0)) return 0.0;
  return static_cast<double>(scenario.agents.size() + scenario.obstacles.size()) / area;
}

std::vector<std::pair<std::size_t, double>> potential_trace(const Trajectory &traj) {
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(traj.samples.size());
  for (const auto &s : traj.samples) out.emplace_back(s.step, s.potential);
  return out;
}

RunMetrics summarize(const Scenario &scenario, const RunResult &result, const RunResult *baseline) {
  RunMetrics m;
  m.mode = result.mode;
  m.density = density(scenario);
  m.min_clearance = result.min_inter_agent_distance;
  m.min_obstacle_clearance = result.min_obstacle_clearance;
  m.steps = result.steps;
  std::size_t done = 0;
  for (const auto &a : result.agents) {
    m.per_agent_time[a.agent_id] = a.convergence_step;
    if (result.mode == Mode::Mnf) {
      m.alpha_dagger[a.agent_id] = a.alpha_dagger;
      m.alpha_final[a.agent_id] = a.alpha;
      m.alpha_escalations[a.agent_id] = a.alpha_escalations;
    }
    if (a.converged()) ++done;
  }
  m.completed = result.agents.empty() ? 1.0 : static_cast<double>(done) / result.agents.size();
  if (baseline) {
    const auto mt = result.convergence_times();
    const auto dt = baseline->convergence_times();
    const KappaResult k = result.mode == Mode::Mnf ? kappa(mt, dt) : kappa(dt, mt);
    m.kappa = k.value;
    m.kappa_reason = k.reason;
  }
  return m;
}

}  // namespace mnf
