#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mnf/vec2.hpp"

namespace mnf {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Malformed or inconsistent input data (bad scenario, bad parameters).
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base class for numerical faults (singular evaluation, non-finite values).
class NumericalFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A potential was evaluated within the guard distance of one of its
/// repulsive objects.
class SingularityError : public NumericalFault {
 public:
  SingularityError(const std::string &what, Vec2 where)
      : NumericalFault(what), position_(where) {}
  Vec2 position() const { return position_; }

 private:
  Vec2 position_;
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Axis-aligned rectangle [0, width] x [0, height]. The four walls act as
/// repulsive objects.
struct Workspace {
  double width = 1.0;
  double height = 1.0;

  double area() const { return width * height; }
  double diagonal() const;
  bool contains(Vec2 q) const {
    return q.x > 0.0 && q.x < width && q.y > 0.0 && q.y < height;
  }
  /// Distance from q to the nearest wall (negative outside).
  double wall_distance(Vec2 q) const;
  /// Orthogonal projections of q onto the left, right, bottom and top walls.
  std::array<Vec2, 4> wall_projections(Vec2 q) const {
    return {Vec2{0.0, q.y}, Vec2{width, q.y}, Vec2{q.x, 0.0}, Vec2{q.x, height}};
  }
};

struct Agent {
  int id = 0;
  Vec2 start;   // initial position
  Vec2 target;
  int coalition = 0;
};

struct Obstacle {
  int id = 0;
  Vec2 center;
  double radius = 0.0;
};

/// Weights of the confined function, kernel and motion step.
struct PotentialParams {
  double lambda1 = 0.4;    // attraction
  double lambda2 = 12.0;   // repulsion
  double lambda3 = 0.001;  // association
  double alpha = 2.0;      // confinement factor, > 1
  double beta = 10.0;      // kernel factor
  double gamma = 0.05;     // gradient-descent step factor

  /// Throws ScenarioError on an out-of-range field.
  void validate() const;
};

struct Scenario {
  Workspace workspace;
  std::vector<Agent> agents;
  std::vector<Obstacle> obstacles;
  PotentialParams params;

  std::vector<Vec2> start_positions() const;
  std::vector<Vec2> target_positions() const;
  Scenario translated(Vec2 offset) const;
};

/// Agent-id -> coalition-id. Total association is a single coalition; the
/// all-singletons partition is the fully selfish limit.
class CoalitionPartition {
 public:
  explicit CoalitionPartition(const Scenario &scenario);

  const std::map<int, int> &assignment() const { return assignment_; }
  std::size_t coalition_count() const;
  /// Indices (into scenario.agents) of agent `index`'s allies, excluding itself.
  std::vector<std::size_t> allies_of(std::size_t index) const;

 private:
  std::vector<int> coalition_of_index_;
  std::map<int, int> assignment_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class ViolationKind {
  InvalidWorkspace,
  InvalidParams,
  OutsideWorkspace,
  DegenerateAgent,
  TargetInsideObstacle,
  NegativeRadius,
  DuplicateId,
  BadCoalition,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

/// Collects every violation; never throws.
ValidationResult validate_scenario(const Scenario &scenario);

std::string to_string(ViolationKind kind);

}  // namespace mnf
