#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mnf/coordinator.hpp"
#include "mnf/metrics.hpp"
#include "mnf/scenario.hpp"

namespace mnf {

struct CompareResult {
  RunResult mnf;
  RunResult dnf;
  KappaResult kappa;
};

/// Runs both modes on the same scenario with the same step factor.
CompareResult compare(const Scenario &scenario, const SimConfig &cfg);

struct SuiteColumn {
  std::string label;
  GeneratorSpec spec;
  PotentialParams params;
  double density = 0.0;
  std::optional<double> kappa;
  std::string kappa_reason;
  std::vector<double> alpha_daggers;  // per agent
  std::optional<std::size_t> mnf_makespan;
  std::optional<std::size_t> dnf_makespan;
  double mnf_completed = 0.0;
  double dnf_completed = 0.0;
  std::string error;  // set when the entry failed; the suite carries on
  std::optional<CompareResult> runs;  // kept only when requested

  /// Median per-agent alpha-dagger (0 when none).
  double alpha_dagger_median() const;
};

struct SuiteOptions {
  std::uint64_t seed = 7;
  SimConfig base;        // params are replaced per entry; gamma is kept
  bool keep_runs = false;
};

std::vector<SuiteColumn> run_suite(const std::vector<SuiteEntry> &entries, const SuiteOptions &opts);

struct SweepPoint {
  double multiplier = 1.0;
  std::optional<std::size_t> makespan;  // absent when some agent did not converge
  std::size_t total_steps = 0;          // sum of per-agent convergence steps
  bool all_converged = false;
};

/// MNF runs at multiplier x alpha-dagger for each multiplier; alpha-dagger is
/// solved once. Throws ScenarioError on an empty list or a multiplier < 1.
std::vector<SweepPoint> sweep_alpha(const Scenario &scenario, const std::vector<double> &multipliers,
                                    const SimConfig &cfg);

/// Fixed-width text table, one column per entry.
std::string format_suite_table(const std::vector<SuiteColumn> &columns);

}  // namespace mnf
