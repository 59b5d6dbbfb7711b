#include "mnf/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace mnf {

double Workspace::diagonal() const { return std::hypot(width, height); }

double Workspace::wall_distance(Vec2 q) const {
  return std::min({q.x, width - q.x, q.y, height - q.y});
}

void PotentialParams::validate() const {
  auto fail = [](const char *what) { throw ScenarioError(std::string("invalid params: ") + what); };
  if (!(lambda1 > 0.0)) fail("lambda1 must be > 0");
  if (!(lambda2 > 0.0)) fail("lambda2 must be > 0");
  if (!(lambda3 >= 0.0)) fail("lambda3 must be >= 0");
  if (!(alpha > 1.0)) fail("alpha must be > 1");
  if (!(beta > 0.0)) fail("beta must be > 0");
  if (!(gamma > 0.0)) fail("gamma must be > 0");
}

std::vector<Vec2> Scenario::start_positions() const {
  std::vector<Vec2> out;
  out.reserve(agents.size());
  for (const auto &a : agents) out.push_back(a.start);
  return out;
}

std::vector<Vec2> Scenario::target_positions() const {
  std::vector<Vec2> out;
  out.reserve(agents.size());
  for (const auto &a : agents) out.push_back(a.target);
  return out;
}

Scenario Scenario::translated(Vec2 offset) const {
  Scenario s = *this;
  for (auto &a : s.agents) {
    a.start += offset;
    a.target += offset;
  }
  for (auto &o : s.obstacles) o.center += offset;
  return s;
}

CoalitionPartition::CoalitionPartition(const Scenario &scenario) {
  coalition_of_index_.reserve(scenario.agents.size());
  for (const auto &a : scenario.agents) {
    coalition_of_index_.push_back(a.coalition);
    assignment_[a.id] = a.coalition;
  }
}

std::size_t CoalitionPartition::coalition_count() const {
  return std::set<int>(coalition_of_index_.begin(), coalition_of_index_.end()).size();
}

std::vector<std::size_t> CoalitionPartition::allies_of(std::size_t index) const {
  std::vector<std::size_t> out;
  const int c = coalition_of_index_.at(index);
  for (std::size_t k = 0; k < coalition_of_index_.size(); ++k) {
    if (k != index && coalition_of_index_[k] == c) out.push_back(k);
  }
  return out;
}

bool ValidationResult::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation &v) { return v.kind == kind; });
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::InvalidWorkspace: return "invalid workspace";
    case ViolationKind::InvalidParams: return "invalid params";
    case ViolationKind::OutsideWorkspace: return "outside workspace";
    case ViolationKind::DegenerateAgent: return "degenerate agent";
    case ViolationKind::TargetInsideObstacle: return "target inside obstacle";
    case ViolationKind::NegativeRadius: return "negative radius";
    case ViolationKind::DuplicateId: return "duplicate id";
    case ViolationKind::BadCoalition: return "bad coalition";
  }
  return "unknown";
}

ValidationResult validate_scenario(const Scenario &scenario) {
  ValidationResult result;
  auto add = [&](ViolationKind kind, const std::string &detail) {
    result.violations.push_back({kind, to_string(kind) + ": " + detail});
  };
  auto pos = [](Vec2 p) {
    std::ostringstream os;
    os << '(' << p.x << ", " << p.y << ')';
    return os.str();
  };

  const Workspace &ws = scenario.workspace;
  const bool ws_ok = ws.width > 0.0 && ws.height > 0.0;
  if (!ws_ok) add(ViolationKind::InvalidWorkspace, "width and height must be positive");

  try {
    scenario.params.validate();
  } catch (const ScenarioError &e) {
    add(ViolationKind::InvalidParams, e.what());
  }

  std::set<int> agent_ids;
  for (const auto &a : scenario.agents) {
    const std::string tag = "agent " + std::to_string(a.id);
    if (!agent_ids.insert(a.id).second) add(ViolationKind::DuplicateId, tag);
    if (a.start == a.target) add(ViolationKind::DegenerateAgent, tag + " start equals target");
    if (ws_ok && !ws.contains(a.start)) add(ViolationKind::OutsideWorkspace, tag + " start " + pos(a.start));
    if (ws_ok && !ws.contains(a.target)) add(ViolationKind::OutsideWorkspace, tag + " target " + pos(a.target));
    if (a.coalition < 0) add(ViolationKind::BadCoalition, tag + " has negative coalition id");
    for (const auto &o : scenario.obstacles) {
      if (distance(a.target, o.center) <= std::max(o.radius, 0.0)) {
        add(ViolationKind::TargetInsideObstacle,
            tag + " target within obstacle " + std::to_string(o.id));
      }
    }
  }

  std::set<int> obstacle_ids;
  for (const auto &o : scenario.obstacles) {
    const std::string tag = "obstacle " + std::to_string(o.id);
    if (!obstacle_ids.insert(o.id).second) add(ViolationKind::DuplicateId, tag);
    if (!(o.radius >= 0.0)) add(ViolationKind::NegativeRadius, tag);
    if (ws_ok && !ws.contains(o.center)) add(ViolationKind::OutsideWorkspace, tag + " center " + pos(o.center));
  }
  return result;
}

}  // namespace mnf
