#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mnf/core.hpp"

namespace mnf {

/// Random-placement recipe. Every placement keeps `min_separation` from the
/// walls and from every other placement; obstacle disks add their radius.
struct GeneratorSpec {
  std::size_t n_agents = 0;
  std::size_t n_obstacles = 0;
  double width = 30.0;
  double height = 15.0;
  double min_separation = 0.0;  // <= 0: 2% of the workspace diagonal
  double obstacle_radius = 1.0;
  std::uint64_t seed = 1;
  std::size_t coalitions = 1;   // agents assigned round-robin
  std::size_t rejection_budget = 200000;
};

class InfeasibleSpecError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

/// Deterministic for a given spec. Throws InfeasibleSpecError when the
/// rejection budget runs out.
Scenario generate(const GeneratorSpec &spec, const PotentialParams &params = {});

struct SuiteEntry {
  std::string label;
  GeneratorSpec spec;
  PotentialParams params;
};

/// Total-association setups: densities rising left to right.
std::vector<SuiteEntry> table1_suite();
/// Partial associations: 100 agents, 50 obstacles, 40 x 25, 5/10/20/50 coalitions.
std::vector<SuiteEntry> table2_suite();

/// Scales agent and obstacle counts by `factor` and the area by the same
/// factor, keeping densities (up to count rounding).
std::vector<SuiteEntry> scaled_suite(std::vector<SuiteEntry> suite, double factor);

}  // namespace mnf
