#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "mnf/coordinator.hpp"
#include "mnf/core.hpp"
#include "mnf/criticality.hpp"
#include "mnf/metrics.hpp"

namespace mnf {

using json = nlohmann::json;

class ScenarioNotFound : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

// Scenario schema:
//   workspace{width,height}
//   agents[{id, q0:[x,y], qt:[x,y], coalition}]
//   obstacles[{id, center:[x,y], radius}]
//   params{lambda1, lambda2, lambda3, alpha, beta, gamma}
json scenario_to_json(const Scenario &scenario);
Scenario scenario_from_json(const json &doc);

Scenario load_scenario(const std::filesystem::path &path);
void save_scenario(const std::filesystem::path &path, const Scenario &scenario);

/// One row per (agent, step): agent_id,step,x,y,potential,phase.
void write_trajectories_csv(std::ostream &os, const RunResult &result);

json metrics_to_json(const RunMetrics &metrics);
json report_to_json(const CriticalityReport &report);

/// Shortest decimal text that round-trips the double.
std::string format_number(double v);

void write_text_file(const std::filesystem::path &path, const std::string &text);

}  // namespace mnf
