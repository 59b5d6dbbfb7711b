#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mnf/coordinator.hpp"
#include "mnf/core.hpp"

namespace mnf {

struct KappaResult {
  std::optional<double> value;
  std::string reason;  // why value is absent
};

/// Ratio of the slowest MNF agent's convergence time to the slowest DNF
/// agent's. Absent when either run left an agent unconverged.
KappaResult kappa(std::span<const std::optional<std::size_t>> mnf_times,
                  std::span<const std::optional<std::size_t>> dnf_times);

/// (agents + obstacles) per unit area.
double density(const Scenario &scenario);

std::vector<std::pair<std::size_t, double>> potential_trace(const Trajectory &traj);

/// Largest convergence step; nullopt when any agent did not converge.
std::optional<std::size_t> makespan(std::span<const std::optional<std::size_t>> times);

struct RunMetrics {
  Mode mode = Mode::Mnf;
  std::map<int, std::optional<std::size_t>> per_agent_time;
  std::map<int, double> alpha_dagger;  // MNF only
  std::map<int, double> alpha_final;   // MNF only, after stall doublings
  std::map<int, std::size_t> alpha_escalations;
  std::optional<double> kappa;
  std::string kappa_reason;
  double density = 0.0;
  double min_clearance = 0.0;           // between agents
  double min_obstacle_clearance = 0.0;  // to obstacle surfaces
  double completed = 0.0;               // fraction of agents converged
  std::size_t steps = 0;
};

/// Metrics of `result`; kappa is filled when a baseline run is supplied.
RunMetrics summarize(const Scenario &scenario, const RunResult &result,
                     const RunResult *baseline = nullptr);

}  // namespace mnf
