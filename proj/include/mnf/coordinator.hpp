#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "mnf/core.hpp"
#include "mnf/criticality.hpp"
#include "mnf/potentials.hpp"

namespace mnf {

enum class Mode { Mnf, Dnf };

std::string_view to_string(Mode mode);

/// A gradient evaluated to NaN or infinity.
class NonFiniteGradient : public NumericalFault {
 public:
  using NumericalFault::NumericalFault;
};

struct SimConfig {
  PotentialParams params;
  Mode mode = Mode::Mnf;
  std::size_t max_steps = 20000;
  double convergence_epsilon = 0.0;  // <= 0: 1e-3 x workspace diagonal
  double step_clip = 0.25;           // max displacement as a fraction of clearance
  bool resolve_alpha_each_step = false;
  bool sequential = false;           // plan agents one after another instead of lockstep
  double alpha_multiplier = 1.0;     // run at multiplier x alpha-dagger
  std::optional<double> fixed_alpha; // skip solving, use this alpha for every agent
  std::optional<std::vector<double>> alpha_daggers;  // precomputed per-agent factors
  bool include_agent_targets = true; // other targets bound the confinement radius
  // A Planning agent that closes less than a tenth of its confinement radius
  // within this many steps doubles its alpha (0 disables).
  std::size_t stall_window = 10;
  AlphaSolverOptions solver;
  DnfParams dnf;

  double epsilon_for(const Workspace &ws) const {
    return convergence_epsilon > 0.0 ? convergence_epsilon : 1e-3 * ws.diagonal();
  }
};

struct Sample {
  std::size_t step = 0;
  Vec2 position;
  double potential = 0.0;
  Phase phase = Phase::Planning;
};

struct Trajectory {
  int agent_id = 0;
  std::vector<Sample> samples;
};

struct AgentOutcome {
  int agent_id = 0;
  double alpha = 0.0;               // confinement factor used (MNF)
  double alpha_dagger = 0.0;        // solved factor before the multiplier (MNF)
  double confinement_radius = 0.0;
  std::size_t alpha_escalations = 0;  // stall-triggered doublings
  std::optional<std::size_t> kernel_entry_step;
  std::optional<std::size_t> convergence_step;
  double final_distance = 0.0;

  bool converged() const { return convergence_step.has_value(); }
};

struct RunResult {
  Mode mode = Mode::Mnf;
  std::vector<Trajectory> trajectories;
  std::vector<AgentOutcome> agents;
  std::vector<CriticalityReport> criticality;  // MNF only, one per agent
  std::size_t steps = 0;
  bool all_converged = false;
  double min_inter_agent_distance = 0.0;
  double min_obstacle_clearance = 0.0;  // to obstacle surfaces; negative = inside a disk

  std::vector<std::optional<std::size_t>> convergence_times() const;
};

/// One gradient-descent step q - gamma g with the displacement clipped to
/// max_step. Throws NonFiniteGradient on a NaN/inf gradient.
Vec2 gdc_step(Vec2 q, Vec2 gradient, double gamma, double max_step);

/// Time-stepped multi-agent coordination. MNF agents descend psi until they
/// enter their confinement region, then the kernel; agents within epsilon of
/// their target park there. Numerical faults propagate with agent context.
RunResult run(const Scenario &scenario, const SimConfig &cfg);

}  // namespace mnf
