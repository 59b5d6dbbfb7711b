#pragma once

#include <string>

#include "mnf/coordinator.hpp"
#include "mnf/core.hpp"

namespace mnf {

/// Workspace, obstacles, targets and every agent path; kernel-phase
/// segments drawn dashed.
std::string trajectory_svg(const Scenario &scenario, const RunResult &result);

/// Potential value against step, one polyline per agent, log-scaled.
std::string potential_svg(const RunResult &result);

}  // namespace mnf
